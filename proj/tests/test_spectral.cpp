#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "elx/rng.hpp"
#include "elx/spectral.hpp"

using namespace elx;
using std::numbers::pi;

namespace {

Configuration random_state(Rng& rng, int n, double a) {
  // random composition of n over a prefix of the lattice
  std::vector<std::int64_t> h;
  std::int64_t remaining = n;
  while (remaining > 0) {
    std::int64_t v = 1 + static_cast<std::int64_t>(rng.next_u64() %
                                                   static_cast<std::uint64_t>(remaining));
    if (static_cast<int>(h.size()) == n - 1) v = remaining;
    h.push_back(v);
    remaining -= v;
  }
  h.resize(n, 0);
  return Configuration(LatticeParams(n, a), std::move(h));
}

}  // namespace

TEST_CASE("difference operator shapes") {
  Matrix delta = delta_matrix(4);
  // symmetric, zero row sums
  for (int i = 0; i < 4; ++i) {
    double row = 0;
    for (int j = 0; j < 4; ++j) {
      row += delta.at(i, j);
      CHECK(delta.at(i, j) == delta.at(j, i));
    }
    CHECK(row == doctest::Approx(0.0));
  }
  Matrix d = d_matrix(4);
  for (int j = 0; j < 4; ++j) {
    double col = 0;
    for (int i = 0; i < 4; ++i) col += d.at(i, j);
    if (j == 0)
      CHECK(col == doctest::Approx(-4.0));
    else if (j == 3)
      CHECK(col == doctest::Approx(4.0));
    else
      CHECK(col == doctest::Approx(0.0));
  }
}

TEST_CASE("hand eigenpairs at n = 2") {
  // psi_1 = (1, -1); Delta psi_1 = -8 psi_1 = -4 n^2 sin^2(pi/4) psi_1
  auto psi1 = psi_vector(2, 1);
  CHECK(psi1[0] == doctest::Approx(1.0));
  CHECK(psi1[1] == doctest::Approx(-1.0));
  auto dp = delta_matrix(2).apply(psi1);
  CHECK(dp[0] == doctest::Approx(-8.0));
  CHECK(dp[1] == doctest::Approx(8.0));
  // D psi_1 = (0, -4) = -lambda phi_1 with phi_1 = (0, sqrt 2)
  auto lp = d_matrix(2).apply(psi1);
  CHECK(lp[0] == doctest::Approx(0.0));
  CHECK(lp[1] == doctest::Approx(-4.0));
  auto phi1 = phi_vector(2, 1);
  CHECK(phi1[0] == doctest::Approx(0.0));
  CHECK(phi1[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(lambda_kn(2, 1) == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("basis properties across the n ladder") {
  for (int n : {2, 4, 8, 16, 32, 64}) {
    BasisReport rep = verify_basis_properties(n);
    CHECK(rep.max_residual() < 1e-12);
  }
}

TEST_CASE("partial trig sum identity") {
  // m = 1 collapses: the constant terms are the variable terms at m = 1
  CHECK(trig_sum_identity_residual(8, 3, 2, 1) < 1e-14);
  CHECK(trig_sum_identity_residual(8, 3, 2, 5) < 1e-12);
  for (int n = 2; n <= 32; ++n)
    for (int j = 1; j < n; ++j)
      for (int k = 1; k < n; ++k) {
        if (trig_identity_degenerate(n, j, k)) continue;
        for (int m = 1; m <= n; ++m)
          CHECK(trig_sum_identity_residual(n, j, k, m) < 1e-10);
      }
  // k = 0 makes the left side vanish term by term
  double lhs = 0;
  for (int i = 0; i < 6; ++i) lhs += std::sin(0.0) * std::cos(pi * 3 * (2 * i + 1) / 16.0);
  CHECK(lhs == 0.0);
  CHECK_THROWS_AS(trig_sum_identity_residual(8, 3, 3, 4), std::invalid_argument);
}

TEST_CASE("discrete pairing closed forms match direct sums") {
  // n=2: <phi_1, psi_0> = sqrt2/2 (odd case at j=0); diagonal -sin(pi/4)
  CHECK(phi_psi_pairing_N_direct(2, 1, 0) == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(phi_psi_pairing_N_closed(2, 1, 0) == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(phi_psi_pairing_N_direct(2, 1, 1) == doctest::Approx(-std::sin(pi / 4)));
  // n=4, k=1, j=2: direct sum -sqrt2/4 (hand evaluation)
  CHECK(phi_psi_pairing_N_direct(4, 1, 2) == doctest::Approx(-std::sqrt(2.0) / 4));
  CHECK(phi_psi_pairing_N_closed(4, 1, 2) == doctest::Approx(-std::sqrt(2.0) / 4));

  double worst = 0;
  for (int n = 2; n <= 32; ++n)
    for (int k = 1; k < n; ++k)
      for (int j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(phi_psi_pairing_N_direct(n, k, j) -
                                         phi_psi_pairing_N_closed(n, k, j)));
  CHECK(worst < 1e-12);
}

TEST_CASE("even parity pairings vanish off the diagonal") {
  for (int n : {4, 8, 16}) {
    for (int k = 1; k < n; ++k)
      for (int j = 1; j < n; ++j) {
        if (j == k || (j - k) % 2 != 0) continue;
        CHECK(std::abs(phi_psi_pairing_N_direct(n, k, j)) < 1e-13);
      }
  }
}

TEST_CASE("continuous pairing against quadrature") {
  // k=1, j=2 evaluates to -4/(3 pi)
  CHECK(phi_psi_pairing_continuous_closed(1, 2) == doctest::Approx(-4.0 / (3 * pi)));
  CHECK(phi_psi_pairing_continuous_quadrature(1, 2) ==
        doctest::Approx(-4.0 / (3 * pi)).epsilon(1e-10));
  CHECK(phi_psi_pairing_continuous_closed(2, 2) == 0.0);
  CHECK(phi_psi_pairing_continuous_closed(2, 4) == 0.0);
  double worst = 0;
  for (int k = 1; k <= 32; ++k)
    for (int j = 1; j <= 32; ++j)
      worst = std::max(worst, std::abs(phi_psi_pairing_continuous_closed(k, j) -
                                       phi_psi_pairing_continuous_quadrature(k, j)));
  CHECK(worst < 1e-8);
}

TEST_CASE("pairing antisymmetry under the lambda weights") {
  // b_k b_j <phi_k, psi_j> / lambda_k = -b_j b_k <phi_j, psi_k> / lambda_j
  // for distinct j, k >= 1 (the diagonal carries -1/(2n) and is excluded)
  Rng rng(99);
  for (int n : {4, 8, 16, 32}) {
    std::vector<double> b(n);
    for (auto& v : b) v = rng.uniform() * 2 - 1;
    for (int k = 1; k < n; ++k)
      for (int j = 1; j < n; ++j) {
        if (j == k) continue;
        double lhs = b[k] * b[j] * phi_psi_pairing_N_direct(n, k, j) / lambda_kn(n, k);
        double rhs = -b[j] * b[k] * phi_psi_pairing_N_direct(n, j, k) / lambda_kn(n, j);
        CHECK(std::abs(lhs - rhs) < 1e-12);
      }
  }
}

TEST_CASE("h functional") {
  LatticeParams p2(2, 0.0);
  CHECK(h_functional(Configuration(p2, {2, 0})) == doctest::Approx(0.125));
  LatticeParams p4(4, 0.0);
  CHECK(h_functional(Configuration(p4, {1, 1, 1, 1})) == doctest::Approx(0.0));

  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng.next_u64() % 31);
    Configuration c = random_state(rng, n, 0.0);
    double h = h_functional(c);
    double bound = 0;
    for (int j = 0; j < n; ++j)
      bound += static_cast<double>(c.height(j)) * c.height(j);
    bound /= n;
    CHECK(h >= 0.0);
    CHECK(h <= bound + 1e-12);
  }
}

TEST_CASE("h distance") {
  GridFunction zero = GridFunction::constant(0.0);
  CHECK(h_distance(zero, zero, 32) == doctest::Approx(0.0));

  // difference equal to psi_1 contributes exactly one unit
  GridFunction psi1 = GridFunction::sampled(
      [](double x) { return std::sqrt(2.0) * std::cos(pi * x); }, 0.0, 1.0, 1024);
  CHECK(h_distance(psi1, zero, 32) == doctest::Approx(1.0).epsilon(1e-5));

  // Cauchy-Schwarz: sum b_k^2/k^2 <= ||u1-u2||^2 sum 1/k^2
  Rng rng(5150);
  for (int trial = 0; trial < 50; ++trial) {
    double amp = rng.uniform();
    int freq = 1 + static_cast<int>(rng.next_u64() % 5);
    auto f = [&](double x) { return amp * std::sin(2 * pi * freq * x) + 0.25; };
    GridFunction u1 = GridFunction::sampled(f, 0.0, 1.0, 512);
    GridFunction u2 = GridFunction::constant(0.5);
    double lhs = h_distance(u1, u2, 64);
    double l2sq = 0.0;
    for (int i = 0; i < 2048; ++i) {
      double x = (i + 0.5) / 2048;
      double d = u1(x) - u2(x);
      l2sq += d * d / 2048;
    }
    double zeta2 = pi * pi / 6.0;
    CHECK(lhs <= l2sq * zeta2 + 1e-6);
  }
}

TEST_CASE("spectral report aggregates") {
  SpectralReport rep = run_spectral_checks(16);
  CHECK(rep.basis_max < 1e-12);
  CHECK(rep.trig_max < 1e-10);
  CHECK(rep.pairing_discrete_max < 1e-12);
  CHECK(rep.pairing_continuous_max < 1e-8);
  CHECK(rep.to_json().find("basis_max_residual") != std::string::npos);
}
