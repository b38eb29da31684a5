#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "elx/isomorphism.hpp"
#include "elx/rng.hpp"
#include "elx/spectral.hpp"
#include "elx/zero_range.hpp"

using namespace elx;
using std::numbers::pi;

namespace {

Configuration make(int n, double a, std::vector<std::int64_t> h) {
  return Configuration(LatticeParams(n, a), std::move(h));
}

// generator assembled straight from its case definition, written separately
// from the production maps so the comparison is two independent routes
std::map<std::pair<int, int>, double> oracle_rates(const std::vector<Configuration>& states,
                                                   int n, double a) {
  auto find = [&](const std::vector<std::int64_t>& h) {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].heights() == h) return static_cast<int>(i);
    throw std::logic_error("state missing");
  };
  std::map<std::pair<int, int>, double> q;
  for (std::size_t si = 0; si < states.size(); ++si) {
    const auto& h = states[si].heights();
    for (int x = 0; x < n; ++x) {
      double rate = n * n * static_cast<double>(h[x] > 1 ? h[x] - 1 : 0);
      if (rate == 0) continue;
      for (int i : {-1, 1}) {
        int y = x + i;
        if (y < 0 || y >= n) continue;  // eta unchanged when the target leaves A_N
        auto next = h;
        next[x] -= 1;
        next[y] += 1;
        q[{static_cast<int>(si), find(next)}] += rate;
      }
    }
    // sigma: first entry absorbs the second, the rest shift, last zero
    std::vector<std::int64_t> next(n, 0);
    next[0] = h[0] + h[1];
    for (int y = 1; y < n - 1; ++y) next[y] = h[y + 1];
    if (next != h) q[{static_cast<int>(si), find(next)}] += a * n;
  }
  return q;
}

}  // namespace

TEST_CASE("apply_jump") {
  Configuration c = make(4, 0, {3, 1, 0, 0});
  CHECK(apply_jump(c, 0, 1).heights() == std::vector<std::int64_t>{2, 2, 0, 0});
  // reflection: the left wall swallows the move
  CHECK(apply_jump(c, 0, -1).heights() == c.heights());
  Configuration mid = make(4, 0, {2, 2, 0, 0});
  Configuration after = apply_jump(mid, 1, 1);
  CHECK(after.heights() == std::vector<std::int64_t>{2, 1, 1, 0});
  // the boundary site moves out by one step when a particle is killed
  CHECK(boundary_S(mid) == doctest::Approx(5.0 / 8.0));
  CHECK(boundary_S(after) == doctest::Approx(7.0 / 8.0));
  CHECK_THROWS_AS(apply_jump(c, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(apply_jump(c, 2, 1), std::invalid_argument);
}

TEST_CASE("apply_drift") {
  CHECK(apply_drift(make(4, 0, {2, 1, 1, 0})).heights() ==
        std::vector<std::int64_t>{3, 1, 0, 0});
  CHECK(apply_drift(make(4, 0, {4, 0, 0, 0})).heights() ==
        std::vector<std::int64_t>{4, 0, 0, 0});
  CHECK(apply_drift(make(4, 0, {1, 1, 1, 1})).heights() ==
        std::vector<std::int64_t>{2, 1, 1, 0});
}

TEST_CASE("total rate enumeration") {
  // n=2, (2,0), a=0: one movable particle, two directions, rate n^2 each
  ZeroRangeSimulator sim(make(2, 0, {2, 0}), 1);
  CHECK(sim.total_rate() == doctest::Approx(8.0));
  ZeroRangeSimulator with_drive(make(2, 1.5, {2, 0}), 1);
  CHECK(with_drive.total_rate() == doctest::Approx(8.0 + 3.0));
}

TEST_CASE("stuck states") {
  ZeroRangeSimulator sim(make(4, 0, {1, 1, 1, 1}), 9);
  CHECK(sim.stuck());
  CHECK_THROWS_AS(sim.step(), StuckError);
  // frozen forward motion still reports states at later times
  sim.advance_to(2.0);
  CHECK(sim.time() == doctest::Approx(2.0));
  CHECK(sim.state().heights() == std::vector<std::int64_t>{1, 1, 1, 1});
  // the drive revives the same configuration
  ZeroRangeSimulator alive(make(4, 1.0, {1, 1, 1, 1}), 9);
  CHECK(!alive.stuck());
}

TEST_CASE("determinism") {
  Configuration c0 = make(16, 1.0, []() {
    std::vector<std::int64_t> h(16, 0);
    for (int i = 0; i < 8; ++i) h[i] = 2;
    return h;
  }());
  std::vector<EventLogEntry> log1, log2;
  auto s1 = simulate(c0, {0.01, 0.02}, 4242, &log1);
  auto s2 = simulate(c0, {0.01, 0.02}, 4242, &log2);
  REQUIRE(log1.size() == log2.size());
  CHECK(log1 == log2);
  CHECK(s1[0] == s2[0]);
  CHECK(s1[1] == s2[1]);
  auto s3 = simulate(c0, {0.01, 0.02}, 4243);
  CHECK(!(s3[1] == s1[1]));  // different seed, different path (a.s.)
}

TEST_CASE("conservation and shape over a long run") {
  Configuration c0 = make(16, 2.0, []() {
    std::vector<std::int64_t> h(16, 0);
    for (int i = 0; i < 8; ++i) h[i] = 2;
    return h;
  }());
  ZeroRangeSimulator sim(c0, 31337);
  for (int e = 0; e < 1000000; ++e) {
    sim.step();
    const auto& h = sim.heights();
    std::int64_t mass = 0;
    bool seen_zero = false, ok = true;
    for (auto v : h) {
      mass += v;
      if (v == 0) seen_zero = true;
      else if (seen_zero) ok = false;
    }
    if (mass != 16 || !ok) {
      REQUIRE(mass == 16);
      REQUIRE(ok);
    }
  }
  CHECK(true);
}

TEST_CASE("event times strictly increase") {
  Configuration c0 = make(8, 1.0, {4, 2, 1, 1, 0, 0, 0, 0});
  std::vector<EventLogEntry> log;
  simulate(c0, {0.05}, 77, &log);
  for (std::size_t i = 1; i < log.size(); ++i) CHECK(log[i].time > log[i - 1].time);
}

TEST_CASE("generator matches the definition at small n") {
  for (int n : {2, 3, 4}) {
    LatticeParams params(n, 1.0);
    auto states = enumerate_states(params);
    auto oracle = oracle_rates(states, n, params.a);
    RateMatrix production = build_x_rates(states);
    // same sparsity and same values
    CHECK(oracle.size() == production.size());
    for (const auto& [key, rate] : oracle) {
      auto it = production.find(key);
      REQUIRE(it != production.end());
      CHECK(it->second.value(n, params.a) == doctest::Approx(rate).epsilon(1e-14));
    }
  }
}

TEST_CASE("generator identity on linear functionals") {
  // L_N <f, eta>_N = <Delta_N f, rho(eta)>_N - a <D_N f, eta>_N
  for (int n : {2, 3, 4}) {
    double a = 1.25;
    LatticeParams params(n, a);
    auto states = enumerate_states(params);
    RateMatrix q = build_x_rates(states);
    for (int k = 0; k < n; ++k) {
      auto f = psi_vector(n, k);
      Matrix delta = delta_matrix(n);
      Matrix d = d_matrix(n);
      auto delta_f = delta.apply(f);
      auto d_f = d.apply(f);
      for (std::size_t si = 0; si < states.size(); ++si) {
        const auto& h = states[si].heights();
        double pair_f = 0;
        for (int x = 0; x < n; ++x) pair_f += f[x] * h[x];
        pair_f /= n;
        double lhs = 0;
        for (std::size_t ti = 0; ti < states.size(); ++ti) {
          auto it = q.find({static_cast<int>(si), static_cast<int>(ti)});
          if (it == q.end()) continue;
          const auto& ht = states[ti].heights();
          double pair_t = 0;
          for (int x = 0; x < n; ++x) pair_t += f[x] * ht[x];
          pair_t /= n;
          lhs += it->second.value(n, a) * (pair_t - pair_f);
        }
        double rhs = 0;
        for (int x = 0; x < n; ++x)
          rhs += delta_f[x] * static_cast<double>(rho(h[x])) - a * d_f[x] * h[x];
        rhs /= n;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("first event statistics match the exact rates") {
  // from (3,1,0,0) with a=1: per-direction site rates n^2 rho; categories are
  // (site 0 left), (site 0 right), drive
  Configuration c0 = make(4, 1.0, {3, 1, 0, 0});
  const int trials = 100000;
  std::map<std::string, int> counts;
  for (int t = 0; t < trials; ++t) {
    ZeroRangeSimulator sim(c0, Rng::stream_seed(555, t));
    EventLogEntry e = sim.step();
    std::string key;
    switch (e.kind) {
      case EventLogEntry::Kind::jump_left: key = "L" + std::to_string(*e.site); break;
      case EventLogEntry::Kind::jump_right: key = "R" + std::to_string(*e.site); break;
      case EventLogEntry::Kind::drift: key = "drift"; break;
      case EventLogEntry::Kind::suppressed:
        key = e.site ? "S" + std::to_string(*e.site) : "drift";
        break;
    }
    counts[key]++;
  }
  // rates: site 0 left (suppressed) 32, site 0 right 32, drive 4; total 68
  double total = 68.0;
  auto expect = [&](const std::string& key, double rate) {
    double mean = trials * rate / total;
    double sd = std::sqrt(mean * (1.0 - rate / total));
    CHECK(std::abs(counts[key] - mean) < 3.5 * sd);
  };
  expect("S0", 32.0);
  expect("R0", 32.0);
  expect("drift", 4.0);
}

TEST_CASE("project_Y") {
  YProjection y = project_Y(make(4, 0, {3, 1, 0, 0}));
  CHECK(y.heights == std::vector<std::int64_t>{2, 0, 0, 0});
  CHECK(y.mass == 2);
  CHECK(y.boundary == doctest::Approx(5.0 / 8.0));
  CHECK(y.boundary == doctest::Approx(1.0 - 2.0 / 4.0 + 1.0 / 8.0));

  YProjection empty = project_Y(make(4, 0, {1, 1, 1, 1}));
  CHECK(empty.mass == 0);
  CHECK(empty.boundary == doctest::Approx(9.0 / 8.0));

  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng.next_u64() % 15);
    std::vector<std::int64_t> h;
    std::int64_t remaining = n;
    while (remaining > 0) {
      std::int64_t v =
          1 + static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(remaining));
      if (static_cast<int>(h.size()) == n - 1) v = remaining;
      h.push_back(v);
      remaining -= v;
    }
    int occupied = static_cast<int>(h.size());
    h.resize(n, 0);
    Configuration c = make(n, 0, std::move(h));
    YProjection proj = project_Y(c);
    CHECK(proj.mass == n - occupied);
    CHECK(proj.boundary ==
          doctest::Approx(1.0 - static_cast<double>(proj.mass) / n + 0.5 / n));
    CHECK(proj.boundary == doctest::Approx(boundary_S(c)));
  }
}

TEST_CASE("sample_initial") {
  LatticeParams p4(4, 0.0);
  GridFunction uniform = GridFunction::constant(1.0);
  CHECK(sample_initial(uniform, p4).heights() == std::vector<std::int64_t>{1, 1, 1, 1});

  GridFunction two_block({0.0, 0.5, 0.5, 1.0}, {2.0, 2.0, 0.0, 0.0});
  CHECK(sample_initial(two_block, p4).heights() == std::vector<std::int64_t>{2, 2, 0, 0});

  // pairing converges at rate 1/n
  TestFunction f1 = TestFunction::cosine_mode(1);
  double exact = 2.0 * std::sqrt(2.0) / pi;  // int sqrt2 cos(pi x) * 2 on [0,1/2]
  for (int n : {100, 1000}) {
    Configuration c = sample_initial(two_block, LatticeParams(n, 0.0));
    CHECK(std::abs(pair(f1, c) - exact) < 4.0 / n);
  }

  // shape violations are rejected
  GridFunction dip({0.0, 0.5, 0.5, 1.0}, {0.5, 0.5, 1.5, 1.5});
  CHECK_THROWS_AS(sample_initial(dip, p4), std::invalid_argument);
  GridFunction wrong_mass = GridFunction::constant(2.0);
  CHECK_THROWS_AS(sample_initial(wrong_mass, p4), std::invalid_argument);
}

TEST_CASE("observation at time zero returns the initial state") {
  Configuration c0 = make(4, 1.0, {2, 2, 0, 0});
  auto states = simulate(c0, {0.0}, 5);
  CHECK(states[0] == c0);
}

TEST_CASE("drift monitor starts at zero and accumulates") {
  Configuration flat = make(8, 0.0, {1, 1, 1, 1, 1, 1, 1, 1});
  ZeroRangeSimulator sim(flat, 3);
  auto samples = l2_drift_monitor(sim, {0.0, 0.1});
  CHECK(samples[0].t == 0.0);
  CHECK(samples[0].h == doctest::Approx(0.0));
  CHECK(samples[0].int_sq == doctest::Approx(0.0));
  // stuck flat state: <X,X> = 1 forever, h stays 0
  CHECK(samples[1].h == doctest::Approx(0.0));
  CHECK(samples[1].int_sq == doctest::Approx(0.1));
}
