#include "elx/zpde.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace elx {

std::size_t ZSolution::slice_index(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  if (i > 0 && std::abs(times[i - 1] - t) < std::abs(times[i] - t)) return i - 1;
  return i;
}

double ZSolution::mass(std::size_t slice_idx) const {
  const auto& zz = z[slice_idx];
  double h = 1.0 / m;
  double acc = 0.0;
  for (double v : zz) acc += v * h;
  return acc;
}

GridFunction ZSolution::slice_function(std::size_t slice_idx) const {
  const auto& zz = z[slice_idx];
  double h = 1.0 / m;
  std::vector<double> nodes, values;
  nodes.reserve(zz.size() + 2);
  nodes.push_back(0.0);
  values.push_back(0.5 * (3.0 * zz[0] - zz[1]));
  for (int i = 0; i < m; ++i) {
    nodes.push_back((i + 0.5) * h);
    values.push_back(zz[i]);
  }
  nodes.push_back(1.0);
  values.push_back(0.0);  // held Dirichlet side
  return GridFunction(std::move(nodes), std::move(values));
}

double ZSolution::left_flux_residual(std::size_t slice_idx) const {
  const auto& zz = z[slice_idx];
  double h = 1.0 / m;
  double g0 = kirchhoff_G(zz[0]), g1 = kirchhoff_G(zz[1]), g2 = kirchhoff_G(zz[2]);
  double gy0 = (-2.0 * g0 + 3.0 * g1 - g2) / h;  // quadratic fit at y = 0
  return std::abs(gy0 + a);
}

double ZSolution::left_dirichlet_residual(std::size_t slice_idx) const {
  const auto& zz = z[slice_idx];
  return std::abs(0.5 * (3.0 * zz[0] - zz[1]));
}

ZSolution solve_z(const GridFunction& z0, const ZParams& params,
                  const std::vector<double>& required_times) {
  const int m = params.grid_m;
  const double h = 1.0 / m;
  const double a = params.a;
  if (m < 8) throw std::invalid_argument("solve_z: grid too coarse");

  std::vector<double> z(m);
  for (int i = 0; i < m; ++i) {
    double cell = z0.integral(i * h, (i + 1) * h) / h;
    if (cell < -1e-9 || cell > 1.0 - params.eps_clip + 1e-12)
      throw std::invalid_argument("solve_z: initial data must lie in [0, 1-eps)");
    z[i] = std::clamp(cell, 0.0, 1.0 - params.eps_clip);
  }

  std::vector<double> stops;
  int target = std::max(2, params.max_stored_slices);
  for (int i = 0; i < target; ++i)
    stops.push_back(params.t_max * static_cast<double>(i) / (target - 1));
  for (double t : required_times) {
    if (t < 0 || t > params.t_max + 1e-12)
      throw std::invalid_argument("solve_z: required time outside horizon");
    stops.push_back(std::min(t, params.t_max));
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-15; }),
              stops.end());

  ZSolution sol;
  sol.a = a;
  sol.m = m;
  sol.times.push_back(0.0);
  sol.z.push_back(z);

  auto divergence = [&](const std::vector<double>& w, std::vector<double>& out) {
    // flux gradient of G(w) with the exact influx a at y=0 and a Dirichlet
    // ghost at y=1
    for (int i = 0; i < m; ++i) {
      double face_left, face_right;
      if (i == 0)
        face_left = -a;
      else
        face_left = (kirchhoff_G(w[i]) - kirchhoff_G(w[i - 1])) / h;
      if (i == m - 1)
        face_right = -2.0 * kirchhoff_G(w[m - 1]) / h;
      else
        face_right = (kirchhoff_G(w[i + 1]) - kirchhoff_G(w[i])) / h;
      out[i] = (face_right - face_left) / h;
    }
  };

  std::vector<double> zn = z, fvec(m), dvec(m);
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);

  double t = 0.0;
  std::size_t stop_idx = 1;
  while (stop_idx < stops.size()) {
    double next_stop = stops[stop_idx];
    double dt = params.dt;
    if (t + dt >= next_stop - 1e-15) dt = next_stop - t;
    if (dt <= 0) {
      ++stop_idx;
      continue;
    }

    zn = z;
    bool converged = false;
    for (int it = 0; it < params.max_newton; ++it) {
      divergence(zn, dvec);
      double res = 0.0;
      for (int i = 0; i < m; ++i) {
        fvec[i] = zn[i] - z[i] - dt * dvec[i];
        res = std::max(res, std::abs(fvec[i]));
      }
      if (res <= params.newton_tol) {
        converged = true;
        break;
      }
      for (int i = 0; i < m; ++i) {
        double k_i = diffusivity_K(zn[i]);
        double k_lo = i > 0 ? diffusivity_K(zn[i - 1]) : 0.0;
        double k_hi = i + 1 < m ? diffusivity_K(zn[i + 1]) : 0.0;
        double dii;
        if (i == 0)
          dii = -k_i / (h * h);
        else if (i == m - 1)
          dii = -3.0 * k_i / (h * h);
        else
          dii = -2.0 * k_i / (h * h);
        diag[i] = 1.0 - dt * dii;
        lower[i] = i > 0 ? -dt * (k_lo / (h * h)) : 0.0;
        upper[i] = i + 1 < m ? -dt * (k_hi / (h * h)) : 0.0;
        rhs[i] = -fvec[i];
      }
      // Thomas solve
      for (int i = 1; i < m; ++i) {
        double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
      }
      rhs[m - 1] /= diag[m - 1];
      for (int i = m - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
      for (int i = 0; i < m; ++i)
        zn[i] = std::clamp(zn[i] + rhs[i], 0.0, 1.0 - params.eps_clip);
    }
    if (!converged)
      throw SolverError("solve_z: Newton iteration did not converge at t=" +
                        std::to_string(t));
    z = zn;
    t += dt;
    if (std::abs(t - next_stop) < 1e-14) {
      t = next_stop;
      sol.times.push_back(next_stop);
      sol.z.push_back(z);
      ++stop_idx;
    }
  }
  return sol;
}

TransformPair build_upsilon(const std::vector<double>& v_nodes, double s) {
  std::size_t n = v_nodes.size();
  if (n < 5) throw std::invalid_argument("build_upsilon: need at least 5 nodes");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = s * static_cast<double>(i) / static_cast<double>(n - 1);
  CubicHermite v_interp(x, v_nodes);
  std::vector<double> ups(n), slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    ups[i] = x[i] + v_interp.antiderivative(x[i]);
    slope[i] = 1.0 + v_nodes[i];  // upsilon' = 1 + v exactly
  }
  TransformPair pair;
  pair.s = s;
  pair.upsilon = CubicHermite(x, ups, slope);
  // tau sampled back on a uniform y grid with its exact slopes 1/(1+v)
  std::vector<double> y(n), tau_v(n), tau_s(n);
  double y_hi = ups.back();
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = y_hi * static_cast<double>(i) / static_cast<double>(n - 1);
    double xx = pair.upsilon.inverse(y[i]);
    tau_v[i] = xx;
    tau_s[i] = 1.0 / (1.0 + v_interp(xx));
  }
  pair.tau = CubicHermite(y, tau_v, tau_s);
  return pair;
}

TransformPair build_tau(const std::vector<double>& z_nodes) {
  std::size_t n = z_nodes.size();
  if (n < 5) throw std::invalid_argument("build_tau: need at least 5 nodes");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  CubicHermite z_interp(y, z_nodes);
  std::vector<double> tau_v(n), tau_s(n);
  for (std::size_t i = 0; i < n; ++i) {
    tau_v[i] = y[i] - z_interp.antiderivative(y[i]);
    tau_s[i] = 1.0 - z_nodes[i];  // tau' = 1 - z exactly
  }
  TransformPair pair;
  pair.s = tau_v.back();
  pair.tau = CubicHermite(y, tau_v, tau_s);
  std::vector<double> x(n), ups_v(n), ups_s(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = pair.s * static_cast<double>(i) / static_cast<double>(n - 1);
    double yy = pair.tau.inverse(x[i]);
    ups_v[i] = yy;
    ups_s[i] = 1.0 / (1.0 - z_interp(yy));
  }
  pair.upsilon = CubicHermite(x, ups_v, ups_s);
  return pair;
}

std::vector<double> v_to_z(const std::vector<double>& v_nodes, double s,
                           const std::vector<double>& y_eval) {
  std::size_t n = v_nodes.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = s * static_cast<double>(i) / static_cast<double>(n - 1);
  CubicHermite v_interp(x, v_nodes);
  TransformPair pair = build_upsilon(v_nodes, s);
  std::vector<double> out(y_eval.size());
  for (std::size_t i = 0; i < y_eval.size(); ++i) {
    double xx = pair.upsilon.inverse(std::min(y_eval[i], pair.upsilon(s)));
    double w = v_interp(xx);
    out[i] = w / (1.0 + w);
  }
  return out;
}

std::vector<double> v_to_z(const StefanSolution& sol, double t,
                           const std::vector<double>& y_eval) {
  std::size_t idx = sol.slice_index(t);
  return v_to_z(sol.v[idx], sol.s[idx], y_eval);
}

VProfile z_to_v(const std::vector<double>& z_nodes, int out_cells) {
  for (double zz : z_nodes)
    if (zz >= 1.0) throw std::invalid_argument("z_to_v: z must stay below 1");
  TransformPair pair = build_tau(z_nodes);
  std::size_t n = z_nodes.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  CubicHermite z_interp(y, std::vector<double>(z_nodes));
  VProfile out;
  out.s = pair.s;
  out.v.resize(out_cells + 1);
  for (int i = 0; i <= out_cells; ++i) {
    double x = pair.s * static_cast<double>(i) / out_cells;
    double yy = pair.tau.inverse(x);
    double zz = z_interp(yy);
    out.v[i] = zz / (1.0 - zz);
  }
  return out;
}

// upsilon of a piecewise-linear profile is piecewise quadratic; it is
// inverted by bisection, so indicator data maps to its exact transform
GridFunction psi_of_profile(const GridFunction& v0, double s0, int cells) {
  auto upsilon = [&](double x) { return x + v0.integral(0.0, x); };
  double y_hi = upsilon(s0);
  auto tau = [&](double y) {
    double lo = 0.0, hi = s0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (upsilon(mid) < y)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  std::vector<double> nodes(2 * cells + 1), values(2 * cells + 1);
  for (int i = 0; i <= 2 * cells; ++i) {
    double y = y_hi * static_cast<double>(i) / (2 * cells);
    double w = v0(tau(y));
    nodes[i] = std::min(y, 1.0);
    values[i] = w / (1.0 + w);
  }
  return GridFunction(std::move(nodes), std::move(values));
}

EquivalenceReport equivalence_check(const StefanInitial& initial, double a, double t_max,
                                    int grid_m, double dt,
                                    const std::vector<double>& obs_times) {
  StefanParams sp;
  sp.a = a;
  sp.t_max = t_max;
  sp.grid_m = grid_m;
  sp.dt = dt;
  StefanSolution stefan = solve_stefan(initial, sp, obs_times);

  ZParams zp;
  zp.a = a;
  zp.t_max = t_max;
  zp.grid_m = grid_m;
  zp.dt = dt;
  GridFunction z0 = psi_of_profile(initial.v0, initial.s0, grid_m);
  ZSolution zsol = solve_z(z0, zp, obs_times);

  std::vector<double> centers(grid_m);
  for (int i = 0; i < grid_m; ++i) centers[i] = (i + 0.5) / grid_m;

  EquivalenceReport rep;
  double h_xi = 1.0 / grid_m;
  for (double t : obs_times) {
    std::vector<double> z_ref = v_to_z(stefan, t, centers);
    const auto& z_num = zsol.z[zsol.slice_index(t)];
    double linf = 0.0, l1 = 0.0;
    for (int i = 0; i < grid_m; ++i) {
      double d = std::abs(z_ref[i] - z_num[i]);
      linf = std::max(linf, d);
      l1 += d / grid_m;
    }
    rep.times.push_back(t);
    rep.linf.push_back(linf);
    rep.l1.push_back(l1);
    rep.sup_linf = std::max(rep.sup_linf, linf);
    rep.sup_l1 = std::max(rep.sup_l1, l1);

    const auto& v = stefan.v[stefan.slice_index(t)];
    double s = stefan.s[stefan.slice_index(t)];
    double vx0 = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h_xi) / s;
    rep.robin_residual_v =
        std::max(rep.robin_residual_v, std::abs(vx0 + a * (v[0] + 1.0)));
    std::size_t zi = zsol.slice_index(t);
    rep.flux_residual_z = std::max(rep.flux_residual_z, zsol.left_flux_residual(zi));
    rep.dirichlet_left_z =
        std::max(rep.dirichlet_left_z, zsol.left_dirichlet_residual(zi));
    rep.dirichlet_right_z =
        std::max(rep.dirichlet_right_z, std::abs(1.5 * zsol.z[zi][grid_m - 1] -
                                                 0.5 * zsol.z[zi][grid_m - 2]));
  }
  return rep;
}

std::string EquivalenceReport::to_json() const {
  nlohmann::json j;
  j["sup_linf"] = sup_linf;
  j["sup_l1"] = sup_l1;
  j["robin_residual_v"] = robin_residual_v;
  j["flux_residual_z"] = flux_residual_z;
  j["dirichlet_left_z"] = dirichlet_left_z;
  j["dirichlet_right_z"] = dirichlet_right_z;
  j["times"] = times;
  j["linf"] = linf;
  j["l1"] = l1;
  return j.dump(2);
}

}  // namespace elx
