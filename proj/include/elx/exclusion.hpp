#ifndef ELX_EXCLUSION_HPP
#define ELX_EXCLUSION_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "elx/lattice.hpp"
#include "elx/rng.hpp"
#include "elx/zero_range.hpp"  // EventLogEntry, StuckError

namespace elx {

// 0/1 occupancy over the staggered lattice; the last site is always vacant
class ExclusionConfiguration {
 public:
  ExclusionConfiguration() = default;
  ExclusionConfiguration(LatticeParams params, std::vector<int> occupied);

  const LatticeParams& params() const { return params_; }
  int n() const { return params_.n; }
  const std::vector<int>& occupied() const { return occupied_; }
  int at(int j) const { return occupied_[j]; }
  int particle_count() const;

  bool operator==(const ExclusionConfiguration& other) const {
    return params_.n == other.params_.n && occupied_ == other.occupied_;
  }

 private:
  LatticeParams params_;
  std::vector<int> occupied_;
};

// maximal occupied runs adjacent to each vacancy, recomputable by scan
struct BlockIndex {
  std::vector<int> vacancies;    // sorted vacant site indexes (always holds n-1)
  std::vector<int> left_block;   // run length immediately left of vacancies[i]
  std::vector<int> right_block;  // run length immediately right of vacancies[i]

  static BlockIndex scan(const ExclusionConfiguration& c);
};

// an enabled transition together with its rate in units of n^2 (jumps) or a*n
// (insert); suppressed events never change the state but do consume clock time
struct ExclusionEvent {
  enum class Kind { hop_right, hop_kill, hop_left, wall_suppressed, insert,
                    insert_suppressed };
  Kind kind;
  int edge_site;        // the particle that moves (block edge), -1 for insert
  std::int64_t block_len;  // rate units for hop events
};

// all enabled events of a state with their block-length rates
std::vector<ExclusionEvent> enabled_events(const ExclusionConfiguration& c);

// the swap of an occupied block right edge with the vacancy to its right
ExclusionConfiguration hop_right(const ExclusionConfiguration& c, int edge_site);
// right edge adjacent to the last site: the particle is removed
ExclusionConfiguration hop_kill(const ExclusionConfiguration& c);
// the swap of a block left edge with the vacancy to its left; hops off the
// lattice at site 0 are suppressed
ExclusionConfiguration hop_left(const ExclusionConfiguration& c, int edge_site);
// occupy the first vacant site; suppressed if that site is the last one
ExclusionConfiguration drift_insert(const ExclusionConfiguration& c);

// Gillespie loop over hop/kill/insert with block-length rates. The per-event
// structure mirrors the pile process exactly: total rate 2 n^2 (#particles)
// + a n, with wall hops kept as suppressed clock ticks.
class ExclusionSimulator {
 public:
  ExclusionSimulator(const ExclusionConfiguration& initial, std::uint64_t seed,
                     bool check_blocks = false);

  ExclusionConfiguration state() const;
  double time() const { return time_; }
  double total_rate() const;
  bool stuck() const;

  EventLogEntry step();
  void advance_to(double t, std::vector<EventLogEntry>* log = nullptr);

 private:
  EventLogEntry execute_event(double rate);
  int kth_particle(int k) const;          // k-th occupied site, 0-based
  int next_vacancy_after(int site) const;
  int prev_vacancy_before(int site) const;
  void verify_blocks() const;

  LatticeParams params_;
  std::vector<int> occupied_;
  std::set<int> vacancies_;
  FenwickTree particle_index_;  // 0/1 occupancy for order statistics
  int particle_count_ = 0;
  double time_ = 0;
  Rng rng_;
  bool check_blocks_;
};

std::vector<ExclusionConfiguration> simulate_z(const ExclusionConfiguration& initial,
                                               const std::vector<double>& obs_times,
                                               std::uint64_t seed,
                                               std::vector<EventLogEntry>* log = nullptr);

// empirical measure with atoms of mass 1/n at occupied sites
EmpiricalMeasure z_empirical(const ExclusionConfiguration& c);

}  // namespace elx

#endif
