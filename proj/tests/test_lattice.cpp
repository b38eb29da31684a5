#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "elx/lattice.hpp"
#include "elx/rng.hpp"

using namespace elx;
using std::numbers::pi;

namespace {

Configuration make(int n, double a, std::vector<std::int64_t> h) {
  return Configuration(LatticeParams(n, a), std::move(h));
}

EmpiricalMeasure random_measure(Rng& rng, int max_atoms) {
  int count = 1 + static_cast<int>(rng.next_u64() % max_atoms);
  std::vector<Atom> atoms;
  for (int i = 0; i < count; ++i)
    atoms.push_back({rng.uniform(), rng.uniform() / count});
  return EmpiricalMeasure(std::move(atoms));
}

}  // namespace

TEST_CASE("rho") {
  CHECK(rho(0) == 0);
  CHECK(rho(1) == 0);
  CHECK(rho(5) == 4);
}

TEST_CASE("boundary_S") {
  CHECK(boundary_S(make(4, 0, {3, 1, 0, 0})) == doctest::Approx(5.0 / 8.0));
  CHECK(boundary_S(make(4, 0, {1, 1, 1, 1})) == doctest::Approx(9.0 / 8.0));
  CHECK(boundary_S(make(2, 0, {2, 0})) == doctest::Approx(3.0 / 4.0));
  CHECK_THROWS_AS(boundary_S(make(4, 0, {3, 0, 1, 0})), std::invalid_argument);
  CHECK_THROWS_AS(boundary_S(make(4, 0, {1, 1, 1, 0})), std::invalid_argument);
}

TEST_CASE("pair against configurations") {
  // mass normalization: <1, eta>_N = 1 on valid states
  CHECK(pair(TestFunction::cosine_mode(0), make(4, 0, {2, 1, 1, 0})) ==
        doctest::Approx(1.0));
  // hand values
  CHECK(pair(TestFunction::cosine_mode(1), make(2, 0, {2, 0})) ==
        doctest::Approx(1.0).epsilon(1e-14));
  TestFunction linear{[](double x) { return x; }, [](double) { return 1.0; },
                      [](double) { return 0.0; }, "x"};
  CHECK(pair(linear, make(2, 0, {0, 2})) == doctest::Approx(0.75));
}

TEST_CASE("test functions have flat ends") {
  for (int j = 0; j <= 8; ++j) {
    TestFunction f = TestFunction::cosine_mode(j);
    CHECK(std::abs(f.df(0.0)) < 1e-12);
    CHECK(std::abs(f.df(1.0)) < 1e-12);
  }
}

TEST_CASE("measure distance hand values") {
  EmpiricalMeasure mu({{0.3, 0.5}, {0.7, 0.5}});
  CHECK(measure_distance(mu, mu) == doctest::Approx(0.0));

  EmpiricalMeasure d0({{0.0, 1.0}});
  EmpiricalMeasure d1({{1.0, 1.0}});
  CHECK(measure_distance(d0, d1, 0) == doctest::Approx(0.0));
  // mode 1 contributes (|sqrt2 - (-sqrt2)| ^ 1) / 2 = 1/2
  CHECK(measure_distance(d0, d1, 1) == doctest::Approx(0.5));

  GridFunction uniform1 = GridFunction::constant(1.0);
  GridFunction uniform_half = GridFunction::constant(0.5);
  CHECK(measure_distance(uniform1, uniform_half) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("measure distance symmetry and triangle inequality") {
  Rng rng(12345);
  for (int trial = 0; trial < 1000; ++trial) {
    EmpiricalMeasure a = random_measure(rng, 8);
    EmpiricalMeasure b = random_measure(rng, 8);
    EmpiricalMeasure c = random_measure(rng, 8);
    double ab = measure_distance(a, b);
    double ba = measure_distance(b, a);
    double ac = measure_distance(a, c);
    double cb = measure_distance(c, b);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab <= ac + cb + 1e-12);
  }
}

TEST_CASE("mollify window examples") {
  // atom at 1/2 spreads into the indicator of [1/4, 3/4] at height 2
  EmpiricalMeasure atom({{0.5, 1.0}});
  GridFunction m = mollify_torus(atom, 0.25);
  CHECK(m(0.5) == doctest::Approx(2.0));
  CHECK(m(0.3) == doctest::Approx(2.0));
  CHECK(m(0.2) == doctest::Approx(0.0));
  CHECK(m(0.8) == doctest::Approx(0.0));

  // atom at 0 on the line becomes a height-2 block on [-1/4, 1/4]
  EmpiricalMeasure at_zero({{0.0, 1.0}});
  GridFunction line = mollify_line(at_zero, 0.25);
  CHECK(line(-0.2) == doctest::Approx(2.0));
  CHECK(line(0.2) == doctest::Approx(2.0));
  CHECK(line(0.3) == doctest::Approx(0.0));
  CHECK(line.integral() == doctest::Approx(1.0).epsilon(1e-12));

  // uniform density is invariant on the torus, halves at the line endpoint
  GridFunction uniform = GridFunction::constant(1.0);
  GridFunction torus = mollify_torus(uniform, 0.25);
  for (double x : {0.0, 0.2, 0.5, 0.9, 1.0})
    CHECK(torus(x) == doctest::Approx(1.0).epsilon(1e-12));
  GridFunction line_u = mollify_line(uniform, 0.25);
  CHECK(line_u(0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mollification preserves mass for atomic inputs") {
  Rng rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    EmpiricalMeasure m = random_measure(rng, 12);
    double eps = 0.05 + 0.4 * rng.uniform();
    CHECK(mollify_torus(m, eps).integral() ==
          doctest::Approx(m.total_mass()).epsilon(1e-12));
    CHECK(mollify_line(m, eps).integral() ==
          doctest::Approx(m.total_mass()).epsilon(1e-12));
  }
}

TEST_CASE("torus mollifier acts as the sinc multiplier on fourier modes") {
  // <e_k, K_eps mu> = sin(2 pi k eps)/(2 pi k eps) <e_k, mu>, checked by
  // numerical quadrature of the step density against each mode
  Rng rng(4242);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    EmpiricalMeasure mu = random_measure(rng, 10);
    double eps = 0.03 + 0.3 * rng.uniform();
    GridFunction moll = mollify_torus(mu, eps);
    for (int k = 1; k <= 32; ++k) {
      double panel = 1.0 / (8.0 * k);
      std::complex<double> lhs(
          moll.pair_gauss([k](double x) { return std::cos(2 * pi * k * x); }, panel),
          moll.pair_gauss([k](double x) { return std::sin(2 * pi * k * x); }, panel));
      std::complex<double> mu_hat(0.0, 0.0);
      for (const auto& atom : mu.atoms())
        mu_hat += atom.mass * std::complex<double>(std::cos(2 * pi * k * atom.site),
                                                   std::sin(2 * pi * k * atom.site));
      double mult = std::sin(2 * pi * k * eps) / (2 * pi * k * eps);
      worst = std::max(worst, std::abs(lhs - mult * mu_hat));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("serialization round trips") {
  Configuration c = make(4, 1.5, {3, 1, 0, 0});
  Configuration back = Configuration::from_json(c.to_json());
  CHECK(back == c);
  CHECK(back.params().a == doctest::Approx(1.5));

  EmpiricalMeasure m = EmpiricalMeasure::from_configuration(c);
  EmpiricalMeasure parsed = EmpiricalMeasure::from_csv(m.to_csv());
  REQUIRE(parsed.atoms().size() == m.atoms().size());
  for (std::size_t i = 0; i < m.atoms().size(); ++i) {
    CHECK(parsed.atoms()[i].site == doctest::Approx(m.atoms()[i].site));
    CHECK(parsed.atoms()[i].mass == doctest::Approx(m.atoms()[i].mass));
  }
}
