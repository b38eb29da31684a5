#include "elx/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "elx/rng.hpp"
#include "elx/zero_range.hpp"

namespace elx {

using std::numbers::pi;

std::vector<double> Matrix::apply(const std::vector<double>& v) const {
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += at(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Matrix delta_matrix(int n) {
  Matrix m(n);
  double s = static_cast<double>(n) * n;
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = (i == 0 || i == n - 1) ? -s : -2.0 * s;
    if (i > 0) m.at(i, i - 1) = s;
    if (i < n - 1) m.at(i, i + 1) = s;
  }
  return m;
}

Matrix d_matrix(int n) {
  Matrix m(n);
  for (int i = 1; i < n; ++i) {
    m.at(i, i - 1) = -static_cast<double>(n);
    m.at(i, i) = static_cast<double>(n);
  }
  return m;
}

std::vector<double> psi_vector(int n, int k) {
  std::vector<double> v(n);
  if (k == 0) {
    std::fill(v.begin(), v.end(), 1.0);
    return v;
  }
  for (int i = 0; i < n; ++i) {
    double x = (2.0 * i + 1.0) / (2.0 * n);
    v[i] = std::sqrt(2.0) * std::cos(k * pi * x);
  }
  return v;
}

std::vector<double> phi_vector(int n, int k) {
  std::vector<double> v(n, 0.0);
  if (k == 0) return v;
  for (int i = 0; i < n; ++i)
    v[i] = std::sqrt(2.0) * std::sin(k * pi * static_cast<double>(i) / n);
  return v;
}

double lambda_kn(int n, int k) { return 2.0 * n * std::sin(pi * k / (2.0 * n)); }

double inner_n(const std::vector<double>& a, const std::vector<double>& b, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc / n;
}

double BasisReport::max_residual() const {
  double m = eigen_residual;
  m = std::max(m, difference_residual);
  m = std::max(m, orthonormality_residual);
  m = std::max(m, parseval_residual);
  m = std::max(m, reconstruction_residual);
  return m;
}

BasisReport verify_basis_properties(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("verify_basis_properties: n >= 2");
  BasisReport rep;
  Matrix delta = delta_matrix(n);
  Matrix d = d_matrix(n);

  std::vector<std::vector<double>> psi(n), phi(n);
  for (int k = 0; k < n; ++k) {
    psi[k] = psi_vector(n, k);
    phi[k] = phi_vector(n, k);
  }

  for (int k = 0; k < n; ++k) {
    double lam = lambda_kn(n, k);
    auto dp = delta.apply(psi[k]);
    auto lp = d.apply(psi[k]);
    double r1 = 0, r2 = 0;
    for (int i = 0; i < n; ++i) {
      r1 = std::max(r1, std::abs(dp[i] + lam * lam * psi[k][i]));
      r2 = std::max(r2, std::abs(lp[i] + lam * phi[k][i]));
    }
    // eigenvalue-style relative residuals: the raw entries scale like n^2
    rep.eigen_residual = std::max(rep.eigen_residual, r1 / std::max(1.0, lam * lam));
    rep.difference_residual = std::max(rep.difference_residual, r2 / std::max(1.0, lam));
  }

  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double g = inner_n(psi[k], psi[j], n);
      rep.orthonormality_residual =
          std::max(rep.orthonormality_residual, std::abs(g - (k == j ? 1.0 : 0.0)));
    }

  Rng rng(seed);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.next_u64() % 10);
      b[i] = static_cast<double>(rng.next_u64() % 10);
    }
    double lhs = inner_n(a, b, n);
    double rhs = 0.0;
    std::vector<double> recon(n, 0.0);
    for (int k = 0; k < n; ++k) {
      double ca = inner_n(psi[k], a, n), cb = inner_n(psi[k], b, n);
      rhs += ca * cb;
      for (int i = 0; i < n; ++i) recon[i] += ca * psi[k][i];
    }
    rep.parseval_residual = std::max(rep.parseval_residual, std::abs(lhs - rhs));
    for (int i = 0; i < n; ++i)
      rep.reconstruction_residual =
          std::max(rep.reconstruction_residual, std::abs(recon[i] - a[i]));
  }
  return rep;
}

bool trig_identity_degenerate(int n, int j, int k) {
  return ((j - k) % (2 * n) == 0) || ((j + k) % (2 * n) == 0);
}

double trig_sum_identity_residual(int n, int j, int k, int m) {
  if (j < 1 || j > n - 1 || k < 1 || k > n - 1)
    throw std::invalid_argument("trig_sum_identity_residual: need 1 <= j,k <= n-1");
  if (trig_identity_degenerate(n, j, k))
    throw std::invalid_argument("trig_sum_identity_residual: degenerate (j,k)");
  if (m < 1 || m > n) throw std::invalid_argument("trig_sum_identity_residual: 1 <= m <= n");
  double lhs = 0.0;
  for (int i = 0; i < m; ++i)
    lhs += std::sin(pi * k * i / n) * std::cos(pi * j * (2 * i + 1) / (2.0 * n));
  double cp = 1.0 / std::sin(pi * (j + k) / (2.0 * n));
  double cm = 1.0 / std::sin(pi * (j - k) / (2.0 * n));
  double rhs =
      0.25 * cp *
          (std::cos(pi * (2 * j + k) / (2.0 * n)) -
           std::cos(pi * (2.0 * j * m + 2.0 * k * m - k) / (2.0 * n))) +
      0.25 * cm *
          (std::cos(pi * (2.0 * j * m - 2.0 * k * m + k) / (2.0 * n)) -
           std::cos(pi * (2 * j - k) / (2.0 * n)));
  return std::abs(lhs - rhs);
}

double phi_psi_pairing_N_direct(int n, int k, int j) {
  return inner_n(phi_vector(n, k), psi_vector(n, j), n);
}

double phi_psi_pairing_N_closed(int n, int k, int j) {
  if (k < 1 || k > n - 1 || j < 0 || j > n - 1)
    throw std::invalid_argument("phi_psi_pairing_N_closed: 1 <= k <= n-1, 0 <= j <= n-1");
  if (j == 0) {
    if (k % 2 == 0) return 0.0;
    return std::sqrt(2.0) / (n * std::tan(pi * k / (2.0 * n)));
  }
  if (j == k) return -std::sin(pi * k / (2.0 * n));
  if ((j - k) % 2 == 0) return 0.0;
  double lam = lambda_kn(n, k);
  return -lam * std::cos(pi * j / (2.0 * n)) * std::cos(pi * k / (2.0 * n)) /
         (static_cast<double>(n) * n * std::sin(pi * (j - k) / (2.0 * n)) *
          std::sin(pi * (j + k) / (2.0 * n)));
}

double phi_psi_pairing_continuous_closed(int k, int j) {
  if (k < 1 || j < 1)
    throw std::invalid_argument("phi_psi_pairing_continuous_closed: k,j >= 1");
  if (k == j) return 0.0;
  if ((k - j) % 2 == 0) return 0.0;
  return 4.0 * k / (pi * (static_cast<double>(k) * k - static_cast<double>(j) * j));
}

double phi_psi_pairing_continuous_quadrature(int k, int j) {
  // panels short relative to the highest frequency; GL-8 per panel
  int panels = 8 * (k + j) + 32;
  auto f = [&](double x) { return 2.0 * std::sin(k * pi * x) * std::cos(j * pi * x); };
  static const double node[8] = {-0.9602898564975363, -0.7966664774136267,
                                 -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975363};
  static const double weight[8] = {0.1012285362903763, 0.2223810344533745,
                                   0.3137066458778873, 0.3626837833783620,
                                   0.3626837833783620, 0.3137066458778873,
                                   0.2223810344533745, 0.1012285362903763};
  double acc = 0.0, w = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    double mid = (p + 0.5) * w, half = 0.5 * w;
    for (int q = 0; q < 8; ++q) acc += weight[q] * half * f(mid + half * node[q]);
  }
  return acc;
}

double h_functional(const Configuration& c) {
  c.require_valid();
  int n = c.n();
  std::vector<double> eta(n);
  for (int i = 0; i < n; ++i) eta[i] = static_cast<double>(c.height(i));
  double acc = 0.0;
  for (int k = 1; k < n; ++k) {
    double b = inner_n(psi_vector(n, k), eta, n);
    double lam = lambda_kn(n, k);
    acc += b * b / (lam * lam);
  }
  return acc;
}

std::vector<DriftSample> l2_drift_monitor(ZeroRangeSimulator& sim,
                                          const std::vector<double>& obs_times) {
  std::vector<DriftSample> out;
  out.reserve(obs_times.size());
  for (double t : obs_times) {
    sim.advance_to(t);
    DriftSample s;
    s.t = t;
    s.h = h_functional(sim.state());
    s.int_sq = sim.sum_sq_integral();
    out.push_back(s);
  }
  return out;
}

double h_distance(const GridFunction& u1, const GridFunction& u2, int k_max) {
  double acc = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    TestFunction f = TestFunction::cosine_mode(k);
    double b = pair(f, u1) - pair(f, u2);
    acc += b * b / (static_cast<double>(k) * k);
  }
  return acc;
}

std::string SpectralReport::to_json() const {
  nlohmann::json j;
  j["n_max"] = n_max;
  j["basis_max_residual"] = basis_max;
  j["trig_identity_max_residual"] = trig_max;
  j["pairing_discrete_max_residual"] = pairing_discrete_max;
  j["pairing_continuous_max_residual"] = pairing_continuous_max;
  return j.dump(2);
}

SpectralReport run_spectral_checks(int n_max) {
  SpectralReport rep;
  rep.n_max = n_max;
  for (int n = 2; n <= n_max; n *= 2)
    rep.basis_max = std::max(rep.basis_max, verify_basis_properties(n).max_residual());
  for (int n = 2; n <= std::min(n_max, 32); ++n)
    for (int j = 1; j < n; ++j)
      for (int k = 1; k < n; ++k) {
        if (trig_identity_degenerate(n, j, k)) continue;
        for (int m = 1; m <= n; ++m)
          rep.trig_max = std::max(rep.trig_max, trig_sum_identity_residual(n, j, k, m));
      }
  for (int n = 2; n <= std::min(n_max, 32); ++n)
    for (int k = 1; k < n; ++k)
      for (int j = 0; j < n; ++j)
        rep.pairing_discrete_max =
            std::max(rep.pairing_discrete_max,
                     std::abs(phi_psi_pairing_N_direct(n, k, j) -
                              phi_psi_pairing_N_closed(n, k, j)));
  for (int k = 1; k <= 32; ++k)
    for (int j = 1; j <= 32; ++j) {
      double closed = (k == j) ? 0.0 : phi_psi_pairing_continuous_closed(k, j);
      rep.pairing_continuous_max =
          std::max(rep.pairing_continuous_max,
                   std::abs(closed - phi_psi_pairing_continuous_quadrature(k, j)));
    }
  return rep;
}

}  // namespace elx
