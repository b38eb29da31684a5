#include "elx/zero_range.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace elx {

void FenwickTree::add(int i, std::int64_t delta) {
  if (delta == 0) return;
  total_ += delta;
  for (int k = i + 1; k < static_cast<int>(tree_.size()); k += k & (-k))
    tree_[k] += delta;
}

int FenwickTree::find(double w) const {
  int idx = 0;
  int bit = 1;
  while (2 * bit < static_cast<int>(tree_.size())) bit *= 2;
  double remaining = w;
  for (; bit > 0; bit /= 2) {
    int next = idx + bit;
    if (next < static_cast<int>(tree_.size()) &&
        static_cast<double>(tree_[next]) <= remaining) {
      remaining -= static_cast<double>(tree_[next]);
      idx = next;
    }
  }
  return idx;
}

void FenwickTree::rebuild(const std::vector<std::int64_t>& values) {
  std::fill(tree_.begin(), tree_.end(), 0);
  total_ = 0;
  for (std::size_t i = 0; i < values.size(); ++i) add(static_cast<int>(i), values[i]);
}

std::string EventLogEntry::to_json() const {
  nlohmann::json j;
  j["t"] = time;
  switch (kind) {
    case Kind::jump_left: j["kind"] = "jump_left"; break;
    case Kind::jump_right: j["kind"] = "jump_right"; break;
    case Kind::drift: j["kind"] = "drift"; break;
    case Kind::suppressed: j["kind"] = "suppressed"; break;
  }
  if (site)
    j["site"] = *site;
  else
    j["site"] = nullptr;
  return j.dump();
}

Configuration apply_jump(const Configuration& c, int j, int dir) {
  if (j < 0 || j >= c.n()) throw std::invalid_argument("apply_jump: site off lattice");
  if (dir != 1 && dir != -1) throw std::invalid_argument("apply_jump: dir must be +-1");
  if (c.height(j) < 1) throw std::invalid_argument("apply_jump: empty source site");
  int target = j + dir;
  if (target < 0 || target >= c.n()) return c;  // reflected at the walls
  auto h = c.heights();
  h[j] -= 1;
  h[target] += 1;
  return Configuration(c.params(), std::move(h));
}

Configuration apply_drift(const Configuration& c) {
  int n = c.n();
  auto h = c.heights();
  std::vector<std::int64_t> out(n, 0);
  out[0] = h[0] + h[1];
  for (int j = 1; j < n - 1; ++j) out[j] = h[j + 1];
  return Configuration(c.params(), std::move(out));
}

ZeroRangeSimulator::ZeroRangeSimulator(const Configuration& initial, std::uint64_t seed)
    : params_(initial.params()),
      heights_(initial.heights()),
      rho_(initial.n(), 0),
      rates_(initial.n()),
      seed_(seed),
      rng_(seed) {
  initial.require_valid();
  for (int j = 0; j < params_.n; ++j) {
    rho_[j] = rho(heights_[j]);
    sum_sq_ += heights_[j] * heights_[j];
  }
  rates_.rebuild(rho_);
}

Configuration ZeroRangeSimulator::state() const {
  return Configuration(params_, heights_);
}

double ZeroRangeSimulator::total_rate() const {
  double n = params_.n;
  return 2.0 * n * n * static_cast<double>(rates_.total()) + params_.a * n;
}

bool ZeroRangeSimulator::stuck() const {
  return rates_.total() == 0 && params_.a == 0.0;
}

double ZeroRangeSimulator::sum_sq_now() const {
  return static_cast<double>(sum_sq_) / static_cast<double>(params_.n);
}

EventLogEntry ZeroRangeSimulator::execute_event(double rate) {
  EventLogEntry entry;
  entry.time = time_;
  const int n = params_.n;
  const double a_rate = params_.a * n;
  double r = rng_.uniform() * rate;
  if (r < a_rate) {
    // drive event; identity exactly when all mass already sits at site 0
    entry.site = std::nullopt;
    if (heights_[1] == 0 && heights_[0] == n) {
      entry.kind = EventLogEntry::Kind::suppressed;
      return entry;
    }
    entry.kind = EventLogEntry::Kind::drift;
    std::vector<std::int64_t> out(n, 0);
    out[0] = heights_[0] + heights_[1];
    for (int j = 1; j < n - 1; ++j) out[j] = heights_[j + 1];
    heights_ = std::move(out);
    sum_sq_ = 0;
    for (int j = 0; j < n; ++j) {
      rho_[j] = rho(heights_[j]);
      sum_sq_ += heights_[j] * heights_[j];
    }
    rates_.rebuild(rho_);
    return entry;
  }
  double w = (r - a_rate) / (2.0 * n * n);
  double total_units = static_cast<double>(rates_.total());
  if (w >= total_units) w = std::nextafter(total_units, 0.0);
  int site = rates_.find(w);
  int dir = rng_.coin() ? 1 : -1;
  entry.site = site;
  int target = site + dir;
  if (target < 0 || target >= n) {
    entry.kind = EventLogEntry::Kind::suppressed;
    return entry;
  }
  sum_sq_ += -2 * heights_[site] + 1 + 2 * heights_[target] + 1;
  heights_[site] -= 1;
  heights_[target] += 1;
  std::int64_t nr = rho(heights_[site]);
  rates_.add(site, nr - rho_[site]);
  rho_[site] = nr;
  nr = rho(heights_[target]);
  rates_.add(target, nr - rho_[target]);
  rho_[target] = nr;
  entry.kind = dir > 0 ? EventLogEntry::Kind::jump_right : EventLogEntry::Kind::jump_left;
  return entry;
}

EventLogEntry ZeroRangeSimulator::step() {
  if (stuck()) throw StuckError();
  double rate = total_rate();
  double dt = rng_.exponential(rate);
  int_sq_ += sum_sq_now() * dt;
  time_ += dt;
  return execute_event(rate);
}

void ZeroRangeSimulator::advance_to(double t, std::vector<EventLogEntry>* log) {
  while (time_ < t && !stuck()) {
    double rate = total_rate();
    double dt = rng_.exponential(rate);
    if (time_ + dt > t) {
      int_sq_ += sum_sq_now() * (t - time_);
      time_ = t;
      return;
    }
    int_sq_ += sum_sq_now() * dt;
    time_ += dt;
    EventLogEntry entry = execute_event(rate);
    if (log) log->push_back(entry);
  }
  if (time_ < t) {
    // stuck: the state is frozen forever
    int_sq_ += sum_sq_now() * (t - time_);
    time_ = t;
  }
}

std::vector<Configuration> simulate(const Configuration& initial,
                                    const std::vector<double>& obs_times,
                                    std::uint64_t seed,
                                    std::vector<EventLogEntry>* log) {
  for (std::size_t i = 0; i < obs_times.size(); ++i) {
    if (obs_times[i] < 0) throw std::invalid_argument("simulate: negative time");
    if (i > 0 && obs_times[i] < obs_times[i - 1])
      throw std::invalid_argument("simulate: observation times must be sorted");
  }
  ZeroRangeSimulator sim(initial, seed);
  std::vector<Configuration> out;
  out.reserve(obs_times.size());
  for (double t : obs_times) {
    sim.advance_to(t, log);
    out.push_back(sim.state());
  }
  return out;
}

YProjection project_Y(const Configuration& c) {
  c.require_valid();
  YProjection y;
  y.heights.resize(c.n());
  for (int j = 0; j < c.n(); ++j) {
    y.heights[j] = rho(c.height(j));
    y.mass += y.heights[j];
  }
  y.boundary = 1.0 - static_cast<double>(y.mass) / c.n() + 1.0 / (2.0 * c.n());
  return y;
}

EmpiricalMeasure y_empirical(const Configuration& c) {
  YProjection y = project_Y(c);
  std::vector<Atom> atoms;
  for (int j = 0; j < c.n(); ++j)
    if (y.heights[j] > 0)
      atoms.push_back({c.params().site(j),
                       static_cast<double>(y.heights[j]) / static_cast<double>(c.n())});
  return EmpiricalMeasure(std::move(atoms));
}

Configuration sample_initial(const GridFunction& u0, const LatticeParams& params) {
  int n = params.n;
  double total = u0.integral();
  if (std::abs(total - 1.0) > 1e-8)
    throw std::invalid_argument("sample_initial: u0 must integrate to 1");
  // left-block shape: u0 >= 1 on its support, vanishing beyond
  double support_end = u0.lo();
  for (std::size_t i = 0; i < u0.nodes().size(); ++i)
    if (u0.values()[i] > 0.0) support_end = std::max(support_end, u0.nodes()[i]);
  for (std::size_t i = 0; i < u0.nodes().size(); ++i) {
    double x = u0.nodes()[i], v = u0.values()[i];
    if (x < support_end - 1e-9 && v < 1.0 - 1e-7)
      throw std::invalid_argument("sample_initial: u0 must be >= 1 on its support");
    if (v < -1e-12) throw std::invalid_argument("sample_initial: u0 must be >= 0");
  }

  std::vector<std::int64_t> h(n, 0);
  std::int64_t sum = 0;
  for (int j = 0; j < n; ++j) {
    double cell = u0.integral(static_cast<double>(j) / n, static_cast<double>(j + 1) / n);
    h[j] = std::llround(cell * n);
    if (h[j] < 0) h[j] = 0;
    sum += h[j];
  }
  auto largest = [&]() {
    int arg = 0;
    for (int j = 1; j < n; ++j)
      if (h[j] > h[arg]) arg = j;
    return arg;
  };
  while (sum < n) {
    h[largest()] += 1;
    ++sum;
  }
  while (sum > n) {
    h[largest()] -= 1;
    --sum;
  }
  // compact stray mass leftward onto the first gap
  for (;;) {
    int gap = -1;
    for (int j = 0; j < n; ++j)
      if (h[j] == 0) {
        gap = j;
        break;
      }
    if (gap < 0) break;
    int donor = -1;
    for (int j = gap + 1; j < n; ++j)
      if (h[j] > 0) {
        donor = j;
        break;
      }
    if (donor < 0) break;
    h[gap] += 1;
    h[donor] -= 1;
  }
  Configuration c(params, std::move(h));
  c.require_valid();
  return c;
}

}  // namespace elx
