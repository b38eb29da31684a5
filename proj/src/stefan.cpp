#include "elx/stefan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace elx {

namespace {

// Thomas solve for a tridiagonal system; diag/rhs are clobbered
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
  std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

// one-sided second-order gradient at xi = 1 with the Dirichlet value v_M = 0
double edge_gradient(const std::vector<double>& v, double h) {
  std::size_t m = v.size() - 1;
  return (-4.0 * v[m - 1] + v[m - 2]) / (2.0 * h);
}

}  // namespace

double StefanSolution::s_at(double t) const {
  if (t <= times.front()) return s.front();
  if (t >= times.back()) return s.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return s[i - 1] * (1.0 - w) + s[i] * w;
}

std::size_t StefanSolution::slice_index(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  if (i > 0 && std::abs(times[i - 1] - t) < std::abs(times[i] - t)) return i - 1;
  return i;
}

const std::vector<double>& StefanSolution::slice(double t) const {
  return v[slice_index(t)];
}

double StefanSolution::v_mass(std::size_t slice_idx) const {
  const auto& vv = v[slice_idx];
  double h = 1.0 / m;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += 0.5 * (vv[i] + vv[i + 1]) * h;
  return acc * s[slice_idx];
}

StefanInitial stefan_profile(const std::string& name, double a) {
  if (name == "zero") return {GridFunction::constant(0.0, 0.0, 1.0), 1.0};
  if (name == "indicator-half") return {GridFunction::constant(1.0, 0.0, 0.5), 0.5};
  if (name == "stationary") {
    if (a <= 0.0) return {GridFunction::constant(0.0, 0.0, 1.0), 1.0};
    double s_star = std::log1p(a) / a;
    auto v = [a, s_star](double x) { return std::exp(a * (s_star - x)) - 1.0; };
    return {GridFunction::sampled(v, 0.0, s_star, 800), s_star};
  }
  throw std::invalid_argument("stefan_profile: unknown profile " + name);
}

StefanSolution solve_stefan(const StefanInitial& initial, const StefanParams& params,
                            const std::vector<double>& required_times) {
  const int m = params.grid_m;
  const double h = 1.0 / m;
  const double a = params.a;
  if (m < 8) throw std::invalid_argument("solve_stefan: grid too coarse");
  if (initial.s0 <= 0) throw std::invalid_argument("solve_stefan: s0 must be positive");
  double compat = 1.0 - initial.v0.integral();
  if (std::abs(compat - initial.s0) > 1e-8)
    throw std::invalid_argument("solve_stefan: initial data must satisfy s0 = 1 - int v0");

  // slice schedule: uniform subsampling united with the caller's times
  std::vector<double> stops;
  int target = std::max(2, params.max_stored_slices);
  for (int i = 0; i < target; ++i)
    stops.push_back(params.t_max * static_cast<double>(i) / (target - 1));
  for (double t : required_times) {
    if (t < 0 || t > params.t_max + 1e-12)
      throw std::invalid_argument("solve_stefan: required time outside horizon");
    stops.push_back(std::min(t, params.t_max));
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-15; }),
              stops.end());

  StefanSolution sol;
  sol.a = a;
  sol.m = m;

  std::vector<double> v(m + 1);
  for (int i = 0; i <= m; ++i) v[i] = initial.v0(initial.s0 * i * h);
  v[m] = 0.0;  // Dirichlet node; continuous data already satisfies it
  double s = initial.s0;
  double t = 0.0;

  sol.times.push_back(0.0);
  sol.s.push_back(s);
  sol.v.push_back(v);

  // the first full step is taken as a ramp of halved substeps so that
  // indicator-type data relaxes without an order-one transient
  std::vector<double> ramp;
  for (int k = 1; k <= 20; ++k) ramp.push_back(params.dt / std::pow(2.0, k));
  ramp.push_back(params.dt / std::pow(2.0, 20));
  std::sort(ramp.begin(), ramp.end());

  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  double sp = -a - edge_gradient(v, h) / s;  // s' estimate for the picard start

  std::size_t stop_idx = 1;
  std::size_t ramp_idx = 0;
  while (stop_idx < stops.size()) {
    double next_stop = stops[stop_idx];
    double dt = (ramp_idx < ramp.size()) ? ramp[ramp_idx] : params.dt;
    bool from_ramp = ramp_idx < ramp.size();
    if (t + dt >= next_stop - 1e-15) dt = next_stop - t;
    if (dt <= 0) {
      ++stop_idx;
      continue;
    }

    std::vector<double> v_new = v;
    double s_new = s;
    bool converged = false;
    for (int it = 0; it < params.max_picard; ++it) {
      s_new = s + dt * sp;
      if (s_new <= params.s_min) {
        sol.collapsed = true;
        sol.halt_time = t;
        return sol;
      }
      double inv_s2h2 = 1.0 / (s_new * s_new * h * h);
      // row 0: Robin condition via ghost elimination
      diag[0] = 1.0 + dt * (2.0 * inv_s2h2 - 2.0 * a / (s_new * h) + a * a);
      upper[0] = -dt * 2.0 * inv_s2h2;
      rhs[0] = v[0] + dt * (2.0 * a / (s_new * h) - a * a);
      for (int i = 1; i < m; ++i) {
        double c = a / s_new + (i * h) * sp / s_new;
        lower[i] = -dt * (inv_s2h2 - c / (2.0 * h));
        diag[i] = 1.0 + 2.0 * dt * inv_s2h2;
        upper[i] = -dt * (inv_s2h2 + c / (2.0 * h));
        rhs[i] = v[i];
      }
      // v_m = 0 closes the last row
      auto dl = lower, dd = diag, du = upper, dr = rhs;
      solve_tridiagonal(dl, dd, du, dr);
      for (int i = 0; i < m; ++i) v_new[i] = dr[i];
      v_new[m] = 0.0;
      double sp_next = -a - edge_gradient(v_new, h) / s_new;
      double delta = std::abs(sp_next - sp);
      sp = sp_next;
      if (delta <= params.picard_tol * (1.0 + std::abs(sp))) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw SolverError("solve_stefan: boundary iteration did not converge at t=" +
                        std::to_string(t));
    v = v_new;
    s = s + dt * sp;
    t += dt;
    if (from_ramp) ++ramp_idx;

    if (std::abs(t - next_stop) < 1e-14) {
      sol.times.push_back(next_stop);
      sol.s.push_back(s);
      sol.v.push_back(v);
      t = next_stop;
      ++stop_idx;
    }
  }
  return sol;
}

GridFunction flatten_u(const StefanSolution& sol, double t) {
  std::size_t idx = sol.slice_index(t);
  const auto& v = sol.v[idx];
  double s = sol.s[idx];
  double h = 1.0 / sol.m;
  std::vector<double> nodes, values;
  nodes.reserve(v.size() + 3);
  for (int i = 0; i <= sol.m; ++i) {
    nodes.push_back(s * i * h);
    values.push_back(v[i] + 1.0);
  }
  if (s < 1.0 - 1e-12) {
    nodes.push_back(s);  // unit-height jump at the boundary
    values.push_back(0.0);
    nodes.push_back(1.0);
    values.push_back(0.0);
  }
  return GridFunction(std::move(nodes), std::move(values));
}

namespace {

// trapezoid of f(x) * g(v(x)) over the immobilized slice mapped to [0, s]
double slice_integral(const std::vector<double>& v, double s,
                      const std::function<double(double)>& f,
                      const std::function<double(double)>& weight) {
  int m = static_cast<int>(v.size()) - 1;
  double h = 1.0 / m;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    double x0 = s * i * h, x1 = s * (i + 1) * h;
    acc += 0.5 * (f(x0) * weight(v[i]) + f(x1) * weight(v[i + 1])) * (x1 - x0);
  }
  return acc;
}

}  // namespace

double weak_residual(const StefanSolution& sol, const TestFunction& f, double t) {
  std::size_t end = sol.slice_index(t);
  auto u_pair = [&](std::size_t k) {
    return slice_integral(sol.v[k], sol.s[k], f.f, [](double v) { return v + 1.0; });
  };
  double lhs = u_pair(end) - u_pair(0);

  // time trapezoid of <f'', rho(u)> - a <f', u> over the stored slices
  auto integrand = [&](std::size_t k) {
    double d2 = slice_integral(sol.v[k], sol.s[k], f.ddf, [](double v) { return v; });
    double d1 = slice_integral(sol.v[k], sol.s[k], f.df, [](double v) { return v + 1.0; });
    return d2 - sol.a * d1;
  };
  double rhs = 0.0;
  double prev = integrand(0);
  for (std::size_t k = 1; k <= end; ++k) {
    double cur = integrand(k);
    rhs += 0.5 * (prev + cur) * (sol.times[k] - sol.times[k - 1]);
    prev = cur;
  }
  return lhs - rhs;
}

bool positivity_check(const StefanSolution& sol) {
  for (const auto& slice : sol.v)
    for (double value : slice)
      if (value < -1e-10) return false;
  return true;
}

}  // namespace elx
