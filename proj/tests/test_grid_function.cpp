#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "elx/grid_function.hpp"

using namespace elx;
using std::numbers::pi;

TEST_CASE("evaluation and jumps") {
  // step of height 2 on [0, 1/2] encoded by a repeated node
  GridFunction g({0.0, 0.5, 0.5, 1.0}, {2.0, 2.0, 0.0, 0.0});
  CHECK(g(0.25) == doctest::Approx(2.0));
  CHECK(g(0.75) == doctest::Approx(0.0));
  CHECK(g(0.5) == doctest::Approx(0.0));  // right continuous
  CHECK(g.integral() == doctest::Approx(1.0));
  CHECK(g.integral(0.25, 0.75) == doctest::Approx(0.5));
  CHECK(g(-0.1) == 0.0);
  CHECK(g(1.1) == 0.0);
}

TEST_CASE("l1 distance is exact for piecewise linear inputs") {
  GridFunction a = GridFunction::constant(1.0);
  GridFunction b = GridFunction::constant(0.5);
  CHECK(a.l1_distance(b) == doctest::Approx(0.5).epsilon(1e-12));

  // sign change inside a segment: |x - 1/2| integrates to 1/4
  GridFunction ramp({0.0, 1.0}, {0.0, 1.0});
  GridFunction flat = GridFunction::constant(0.5);
  CHECK(ramp.l1_distance(flat) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("gauss pairing resolves oscillatory factors") {
  GridFunction one = GridFunction::constant(1.0);
  for (int k = 1; k <= 16; k *= 2) {
    double got = one.pair_gauss([k](double x) { return std::cos(2 * pi * k * x); },
                                1.0 / (8.0 * k));
    CHECK(std::abs(got) < 1e-13);
  }
}

TEST_CASE("cubic hermite reproduces smooth functions to fourth order") {
  auto f = [](double x) { return std::sin(2 * pi * x); };
  auto fp = [](double x) { return 2 * pi * std::cos(2 * pi * x); };
  std::vector<double> x(101), y(101);
  for (int i = 0; i <= 100; ++i) {
    x[i] = i / 100.0;
    y[i] = f(x[i]);
  }
  CubicHermite h(x, y);
  double max_err = 0, max_der = 0, max_int = 0;
  for (int i = 0; i <= 333; ++i) {
    double t = i / 333.0;
    max_err = std::max(max_err, std::abs(h(t) - f(t)));
    max_der = std::max(max_der, std::abs(h.derivative(t) - fp(t)));
    double exact = (1.0 - std::cos(2 * pi * t)) / (2 * pi);
    max_int = std::max(max_int, std::abs(h.antiderivative(t) - exact));
  }
  CHECK(max_err < 1e-7);
  CHECK(max_der < 5e-5);
  CHECK(max_int < 3e-8);
}

TEST_CASE("cubic hermite inverse solves monotone interpolants") {
  std::vector<double> x(51), y(51);
  for (int i = 0; i <= 50; ++i) {
    x[i] = i / 50.0;
    y[i] = x[i] + 0.3 * std::sin(pi * x[i]);  // strictly increasing
  }
  CubicHermite h(x, y);
  for (int i = 0; i <= 97; ++i) {
    double t = i / 97.0;
    double v = h(t);
    CHECK(std::abs(h.inverse(v) - t) < 1e-11);
  }
}
