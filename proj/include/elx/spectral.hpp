#ifndef ELX_SPECTRAL_HPP
#define ELX_SPECTRAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "elx/grid_function.hpp"
#include "elx/lattice.hpp"

namespace elx {

// dense square matrix, row-major; sized for the n <= 64 diagnostics
struct Matrix {
  int n = 0;
  std::vector<double> data;

  explicit Matrix(int n_) : n(n_), data(static_cast<std::size_t>(n_) * n_, 0.0) {}
  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
  std::vector<double> apply(const std::vector<double>& v) const;
};

// second symmetric difference with reflecting ends, scaled by n^2
Matrix delta_matrix(int n);
// first left difference with zero first row, scaled by n
Matrix d_matrix(int n);

// psi_k = sqrt(2) cos(k pi x) on the lattice (psi_0 = 1)
std::vector<double> psi_vector(int n, int k);
// phi_k = sqrt(2) sin(k pi (x - 1/2n)) on the lattice (phi_0 = 0)
std::vector<double> phi_vector(int n, int k);
double lambda_kn(int n, int k);  // 2n sin(pi k / 2n)

// (1/n) sum a_i b_i
double inner_n(const std::vector<double>& a, const std::vector<double>& b, int n);

struct BasisReport {
  double eigen_residual = 0;           // Delta psi_k = -lambda^2 psi_k (relative)
  double difference_residual = 0;      // D psi_k = -lambda phi_k (relative)
  double orthonormality_residual = 0;  // Gram matrix vs identity
  double parseval_residual = 0;        // <a,b> = sum <psi,a><psi,b>
  double reconstruction_residual = 0;  // a = sum <psi,a> psi
  double max_residual() const;
};

// checks the five basis identities; the random vectors for the Parseval and
// reconstruction checks are drawn from the given seed
BasisReport verify_basis_properties(int n, std::uint64_t seed = 7);

// |lhs - rhs| of the partial-sum identity
//   sum_{i=0}^{m-1} sin(pi k i / n) cos(pi j (2i+1) / 2n) = csc-form(m)
// degenerate when j = k or j + k = 0 mod 2n (csc pole)
bool trig_identity_degenerate(int n, int j, int k);
double trig_sum_identity_residual(int n, int j, int k, int m);

// <phi_k, psi_j>_N by direct summation and in closed form. The closed form:
//   j = 0               sqrt(2) (k mod 2) cot(pi k / 2n) / n
//   j = k               -sin(pi k / 2n)
//   j-k even, j != k    0
//   j-k odd, j >= 1     -(lambda_{k,n} / n^2) cos(pi j/2n) cos(pi k/2n)
//                        / (sin(pi(j-k)/2n) sin(pi(j+k)/2n))
double phi_psi_pairing_N_direct(int n, int k, int j);
double phi_psi_pairing_N_closed(int n, int k, int j);

// continuous pairing <phi_k, psi_j> = int_0^1 2 sin(k pi x) cos(j pi x) dx,
// equal to 4k/(pi (k^2 - j^2)) for k-j odd, zero otherwise (and for k = j)
double phi_psi_pairing_continuous_closed(int k, int j);
double phi_psi_pairing_continuous_quadrature(int k, int j);

// h_N(eta) = sum_{k=1}^{n-1} <psi_k, eta>_N^2 / lambda_{k,n}^2
double h_functional(const Configuration& c);

// sum_{k=1}^{kmax} <psi_k, u1 - u2>^2 / k^2
double h_distance(const GridFunction& u1, const GridFunction& u2, int k_max);

// one observation of the L2-drift functional along a trajectory
struct DriftSample {
  double t = 0;
  double h = 0;        // h_N(X_t)
  double int_sq = 0;   // int_0^t <X_s, X_s>_N ds
};

class ZeroRangeSimulator;

// records (t, h_N(X_t), int <X,X> ds) at the requested times, driving the
// given simulator forward
std::vector<DriftSample> l2_drift_monitor(ZeroRangeSimulator& sim,
                                          const std::vector<double>& obs_times);

// residual report for the verify-spectral command
struct SpectralReport {
  int n_max = 0;
  double basis_max = 0;
  double trig_max = 0;
  double pairing_discrete_max = 0;
  double pairing_continuous_max = 0;
  std::string to_json() const;
};
SpectralReport run_spectral_checks(int n_max);

}  // namespace elx

#endif
