#ifndef ELX_ZERO_RANGE_HPP
#define ELX_ZERO_RANGE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "elx/lattice.hpp"
#include "elx/rng.hpp"

namespace elx {

// prefix-sum index over integer per-site rate units; selection and updates in
// O(log n). Rates are exact integers so the running total never drifts.
class FenwickTree {
 public:
  explicit FenwickTree(int n) : tree_(n + 1, 0) {}
  void add(int i, std::int64_t delta);
  std::int64_t total() const { return total_; }
  // zero-based index selected by a uniform draw w in [0, total)
  int find(double w) const;
  void rebuild(const std::vector<std::int64_t>& values);

 private:
  std::vector<std::int64_t> tree_;
  std::int64_t total_ = 0;
};

struct EventLogEntry {
  enum class Kind { jump_left, jump_right, drift, suppressed };
  double time = 0;
  Kind kind = Kind::drift;
  std::optional<int> site;  // lattice index, empty for drive events

  std::string to_json() const;
  bool operator==(const EventLogEntry&) const = default;
};

class StuckError : public std::runtime_error {
 public:
  StuckError() : std::runtime_error("zero-range process is stuck: no enabled event") {}
};

// single jump map: one particle from site j to site j+dir; a move off the
// lattice leaves the state unchanged
Configuration apply_jump(const Configuration& c, int j, int dir);

// boundary drive map sigma: first entry absorbs its right neighbour, the rest
// shift left, last entry zero; identity when all mass sits at the first site
Configuration apply_drift(const Configuration& c);

// continuous-time simulation of the pile process by exact exponential clocks.
// Jump rate per direction at site j is n^2 rho(eta_j); the drive fires at
// rate a n. Trajectories are a deterministic function of (state, seed).
class ZeroRangeSimulator {
 public:
  ZeroRangeSimulator(const Configuration& initial, std::uint64_t seed);

  Configuration state() const;
  const std::vector<std::int64_t>& heights() const { return heights_; }
  const LatticeParams& params() const { return params_; }
  double time() const { return time_; }
  std::uint64_t seed() const { return seed_; }

  // total event rate (including moves suppressed at the walls)
  double total_rate() const;
  bool stuck() const;  // no event can ever fire again

  // executes the next event; throws StuckError when none exists
  EventLogEntry step();

  // advances to time t; a stuck state is frozen and simply carried forward.
  // The optional log collects every event executed on the way.
  void advance_to(double t, std::vector<EventLogEntry>* log = nullptr);

  // running statistics for the drift diagnostics
  double sum_sq_integral() const { return int_sq_; }  // int_0^t <X,X>_N ds
  double sum_sq_now() const;                          // <X_t, X_t>_N

 private:
  EventLogEntry execute_event(double rate);

  LatticeParams params_;
  std::vector<std::int64_t> heights_;
  std::vector<std::int64_t> rho_;
  FenwickTree rates_;
  std::int64_t sum_sq_ = 0;  // sum eta_x^2, kept incrementally
  double time_ = 0;
  double int_sq_ = 0;
  std::uint64_t seed_;
  Rng rng_;
};

// states observed at the requested times (deterministic in the seed)
std::vector<Configuration> simulate(const Configuration& initial,
                                    const std::vector<double>& obs_times,
                                    std::uint64_t seed,
                                    std::vector<EventLogEntry>* log = nullptr);

struct YProjection {
  std::vector<std::int64_t> heights;  // rho of each pile
  std::int64_t mass = 0;              // number of Y particles
  double boundary = 0;                // S = 1 - mass/n + 1/2n
};
YProjection project_Y(const Configuration& c);

// empirical measure of the Y projection (atoms rho(eta_x)/n)
EmpiricalMeasure y_empirical(const Configuration& c);

// deterministic rounding of a density with the left-block shape into a valid
// state: cell integrals scaled by n, then unit corrections at the largest
// pile (leftmost on ties) and left-compaction of any stray gap
Configuration sample_initial(const GridFunction& u0, const LatticeParams& params);

}  // namespace elx

#endif
