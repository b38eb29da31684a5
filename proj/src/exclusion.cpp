#include "elx/exclusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elx {

ExclusionConfiguration::ExclusionConfiguration(LatticeParams params,
                                               std::vector<int> occupied)
    : params_(params), occupied_(std::move(occupied)) {
  if (static_cast<int>(occupied_.size()) != params_.n)
    throw std::invalid_argument("ExclusionConfiguration: need n entries");
  for (int v : occupied_)
    if (v != 0 && v != 1)
      throw std::invalid_argument("ExclusionConfiguration: entries must be 0/1");
  if (occupied_.back() != 0)
    throw std::invalid_argument("ExclusionConfiguration: last site must stay vacant");
}

int ExclusionConfiguration::particle_count() const {
  int c = 0;
  for (int v : occupied_) c += v;
  return c;
}

BlockIndex BlockIndex::scan(const ExclusionConfiguration& c) {
  BlockIndex idx;
  int n = c.n();
  for (int j = 0; j < n; ++j)
    if (c.at(j) == 0) idx.vacancies.push_back(j);
  idx.left_block.resize(idx.vacancies.size());
  idx.right_block.resize(idx.vacancies.size());
  for (std::size_t i = 0; i < idx.vacancies.size(); ++i) {
    int v = idx.vacancies[i];
    int l = 0;
    for (int j = v - 1; j >= 0 && c.at(j) == 1; --j) ++l;
    int r = 0;
    for (int j = v + 1; j < n && c.at(j) == 1; ++j) ++r;
    idx.left_block[i] = l;
    idx.right_block[i] = r;
  }
  return idx;
}

std::vector<ExclusionEvent> enabled_events(const ExclusionConfiguration& c) {
  std::vector<ExclusionEvent> events;
  int n = c.n();
  int j = 0;
  while (j < n) {
    if (c.at(j) == 0) {
      ++j;
      continue;
    }
    int start = j;
    while (j < n && c.at(j) == 1) ++j;
    int end = j - 1;  // maximal block [start, end], site end+1 vacant
    std::int64_t len = end - start + 1;
    if (end + 1 == n - 1)
      events.push_back({ExclusionEvent::Kind::hop_kill, end, len});
    else
      events.push_back({ExclusionEvent::Kind::hop_right, end, len});
    if (start >= 1)
      events.push_back({ExclusionEvent::Kind::hop_left, start, len});
    else
      events.push_back({ExclusionEvent::Kind::wall_suppressed, start, len});
  }
  int first_vacant = 0;
  while (first_vacant < n && c.at(first_vacant) == 1) ++first_vacant;
  events.push_back({first_vacant == n - 1 ? ExclusionEvent::Kind::insert_suppressed
                                          : ExclusionEvent::Kind::insert,
                    first_vacant, 0});
  return events;
}

namespace {

std::vector<int> with_swap(const ExclusionConfiguration& c, int from, int to) {
  auto occ = c.occupied();
  occ[from] = 0;
  occ[to] = 1;
  return occ;
}

}  // namespace

ExclusionConfiguration hop_right(const ExclusionConfiguration& c, int edge_site) {
  int n = c.n();
  if (edge_site < 0 || edge_site + 1 >= n - 1)
    throw std::invalid_argument("hop_right: target must be an interior vacancy");
  if (c.at(edge_site) != 1 || c.at(edge_site + 1) != 0)
    throw std::invalid_argument("hop_right: needs occupied site with vacant right neighbour");
  return ExclusionConfiguration(c.params(), with_swap(c, edge_site, edge_site + 1));
}

ExclusionConfiguration hop_kill(const ExclusionConfiguration& c) {
  int n = c.n();
  if (c.at(n - 2) != 1) throw std::invalid_argument("hop_kill: site n-2 must be occupied");
  auto occ = c.occupied();
  occ[n - 2] = 0;
  return ExclusionConfiguration(c.params(), std::move(occ));
}

ExclusionConfiguration hop_left(const ExclusionConfiguration& c, int edge_site) {
  if (edge_site < 0 || edge_site >= c.n() || c.at(edge_site) != 1)
    throw std::invalid_argument("hop_left: edge must be occupied");
  if (edge_site == 0) return c;  // off-lattice hop, suppressed
  if (c.at(edge_site - 1) != 0)
    throw std::invalid_argument("hop_left: left neighbour must be vacant");
  return ExclusionConfiguration(c.params(), with_swap(c, edge_site, edge_site - 1));
}

ExclusionConfiguration drift_insert(const ExclusionConfiguration& c) {
  int n = c.n();
  int first_vacant = 0;
  while (first_vacant < n && c.at(first_vacant) == 1) ++first_vacant;
  if (first_vacant >= n - 1) return c;  // would occupy the forbidden last site
  auto occ = c.occupied();
  occ[first_vacant] = 1;
  return ExclusionConfiguration(c.params(), std::move(occ));
}

ExclusionSimulator::ExclusionSimulator(const ExclusionConfiguration& initial,
                                       std::uint64_t seed, bool check_blocks)
    : params_(initial.params()),
      occupied_(initial.occupied()),
      particle_index_(initial.n()),
      rng_(seed),
      check_blocks_(check_blocks) {
  for (int j = 0; j < params_.n; ++j) {
    if (occupied_[j] == 1) {
      particle_index_.add(j, 1);
      ++particle_count_;
    } else {
      vacancies_.insert(j);
    }
  }
}

ExclusionConfiguration ExclusionSimulator::state() const {
  return ExclusionConfiguration(params_, occupied_);
}

double ExclusionSimulator::total_rate() const {
  double n = params_.n;
  return 2.0 * n * n * particle_count_ + params_.a * n;
}

bool ExclusionSimulator::stuck() const {
  return particle_count_ == 0 && params_.a == 0.0;
}

int ExclusionSimulator::kth_particle(int k) const {
  return particle_index_.find(static_cast<double>(k));
}

int ExclusionSimulator::next_vacancy_after(int site) const {
  auto it = vacancies_.upper_bound(site);
  return *it;  // the last site is always vacant
}

int ExclusionSimulator::prev_vacancy_before(int site) const {
  auto it = vacancies_.lower_bound(site);
  if (it == vacancies_.begin()) return -1;
  return *std::prev(it);
}

void ExclusionSimulator::verify_blocks() const {
  ExclusionConfiguration c(params_, occupied_);
  BlockIndex idx = BlockIndex::scan(c);
  std::vector<int> set_vac(vacancies_.begin(), vacancies_.end());
  if (set_vac != idx.vacancies)
    throw std::logic_error("ExclusionSimulator: vacancy index out of sync");
  for (std::size_t i = 0; i < idx.vacancies.size(); ++i) {
    int v = idx.vacancies[i];
    int expect_left = (i == 0) ? v : v - idx.vacancies[i - 1] - 1;
    if (expect_left != idx.left_block[i])
      throw std::logic_error("ExclusionSimulator: left block length mismatch");
    int expect_right = (i + 1 < idx.vacancies.size())
                           ? idx.vacancies[i + 1] - v - 1
                           : params_.n - 1 - v;
    if (expect_right != idx.right_block[i])
      throw std::logic_error("ExclusionSimulator: right block length mismatch");
  }
}

EventLogEntry ExclusionSimulator::execute_event(double rate) {
  EventLogEntry entry;
  entry.time = time_;
  const int n = params_.n;
  const double a_rate = params_.a * n;
  double r = rng_.uniform() * rate;
  if (r < a_rate) {
    entry.site = std::nullopt;
    int w = *vacancies_.begin();
    if (w == n - 1) {
      entry.kind = EventLogEntry::Kind::suppressed;
    } else {
      entry.kind = EventLogEntry::Kind::drift;
      occupied_[w] = 1;
      vacancies_.erase(w);
      particle_index_.add(w, 1);
      ++particle_count_;
    }
    if (check_blocks_) verify_blocks();
    return entry;
  }
  double u = (r - a_rate) / (n * static_cast<double>(n));
  double total_units = static_cast<double>(particle_count_);
  double w_sel = 0.5 * u;
  if (w_sel >= total_units) w_sel = std::nextafter(total_units, 0.0);
  int p = kth_particle(static_cast<int>(w_sel));
  bool right = rng_.coin();
  if (right) {
    int v = next_vacancy_after(p);
    int edge = v - 1;
    entry.site = edge;
    if (v == n - 1) {
      occupied_[edge] = 0;
      vacancies_.insert(edge);
      particle_index_.add(edge, -1);
      --particle_count_;
      entry.kind = EventLogEntry::Kind::jump_right;  // the killing hop
    } else {
      occupied_[edge] = 0;
      occupied_[v] = 1;
      vacancies_.erase(v);
      vacancies_.insert(edge);
      particle_index_.add(edge, -1);
      particle_index_.add(v, 1);
      entry.kind = EventLogEntry::Kind::jump_right;
    }
  } else {
    int pv = prev_vacancy_before(p);
    int edge = pv + 1;  // block left edge (0 when the block touches the wall)
    entry.site = edge;
    if (pv < 0) {
      entry.kind = EventLogEntry::Kind::suppressed;
    } else {
      occupied_[edge] = 0;
      occupied_[pv] = 1;
      vacancies_.erase(pv);
      vacancies_.insert(edge);
      particle_index_.add(edge, -1);
      particle_index_.add(pv, 1);
      entry.kind = EventLogEntry::Kind::jump_left;
    }
  }
  if (check_blocks_) verify_blocks();
  return entry;
}

EventLogEntry ExclusionSimulator::step() {
  if (stuck()) throw StuckError();
  double rate = total_rate();
  double dt = rng_.exponential(rate);
  time_ += dt;
  return execute_event(rate);
}

void ExclusionSimulator::advance_to(double t, std::vector<EventLogEntry>* log) {
  while (time_ < t && !stuck()) {
    double rate = total_rate();
    double dt = rng_.exponential(rate);
    if (time_ + dt > t) {
      time_ = t;
      return;
    }
    time_ += dt;
    EventLogEntry entry = execute_event(rate);
    if (log) log->push_back(entry);
  }
  if (time_ < t) time_ = t;
}

std::vector<ExclusionConfiguration> simulate_z(const ExclusionConfiguration& initial,
                                               const std::vector<double>& obs_times,
                                               std::uint64_t seed,
                                               std::vector<EventLogEntry>* log) {
  for (std::size_t i = 0; i < obs_times.size(); ++i) {
    if (obs_times[i] < 0) throw std::invalid_argument("simulate_z: negative time");
    if (i > 0 && obs_times[i] < obs_times[i - 1])
      throw std::invalid_argument("simulate_z: observation times must be sorted");
  }
  ExclusionSimulator sim(initial, seed);
  std::vector<ExclusionConfiguration> out;
  out.reserve(obs_times.size());
  for (double t : obs_times) {
    sim.advance_to(t, log);
    out.push_back(sim.state());
  }
  return out;
}

EmpiricalMeasure z_empirical(const ExclusionConfiguration& c) {
  std::vector<Atom> atoms;
  for (int j = 0; j < c.n(); ++j)
    if (c.at(j) == 1) atoms.push_back({c.params().site(j), 1.0 / c.n()});
  return EmpiricalMeasure(std::move(atoms));
}

}  // namespace elx
