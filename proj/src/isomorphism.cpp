#include "elx/isomorphism.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace elx {

SiteMap u_map(const Configuration& c) {
  c.require_valid();
  SiteMap m;
  std::int64_t prefix = 0;
  for (int j = 0; j < c.n(); ++j) {
    if (c.height(j) == 0) break;  // sites at or beyond S are out of the domain
    prefix += rho(c.height(j));
    m.from.push_back(j);
    m.to.push_back(j + static_cast<int>(prefix));
  }
  return m;
}

ExclusionConfiguration psi_map(const Configuration& c) {
  SiteMap m = u_map(c);
  std::vector<int> occ(c.n(), 1);
  for (int idx : m.to) {
    if (idx < 0 || idx >= c.n())
      throw std::logic_error("psi_map: U-image left the lattice");
    occ[idx] = 0;
  }
  // an all-occupied prefix plus vacancies at the image; the last site is the
  // image of S - 1/n whenever the state has any empty site, and the image of
  // the full-lattice state maps every site to itself
  if (occ[c.n() - 1] != 0) throw std::logic_error("psi_map: last site not vacant");
  return ExclusionConfiguration(c.params(), std::move(occ));
}

int t_map_index(const ExclusionConfiguration& z, int y_index) {
  if (y_index < 0 || y_index >= z.n())
    throw std::invalid_argument("t_map_index: index off lattice");
  int prefix = 0;
  for (int j = 0; j < y_index; ++j) prefix += z.at(j);
  return y_index - prefix;
}

double t_map(const ExclusionConfiguration& z, double y_site) {
  int n = z.n();
  int y_index = static_cast<int>(std::llround(y_site * 2 * n - 1)) / 2;
  return (2.0 * t_map_index(z, y_index) + 1.0) / (2.0 * n);
}

Configuration psi_inverse(const ExclusionConfiguration& z, const LatticeParams& params) {
  // vacancy k (in left-to-right order) is the image of pile k; the particles
  // between vacancies k-1 and k are that pile's excess
  std::vector<std::int64_t> heights(params.n, 0);
  int pile = 0;
  int run = 0;
  for (int j = 0; j < z.n(); ++j) {
    if (z.at(j) == 1) {
      ++run;
    } else {
      if (pile >= params.n) throw std::invalid_argument("psi_inverse: too many vacancies");
      heights[pile] = run + 1;
      ++pile;
      run = 0;
    }
  }
  // trailing particles would mean a vacancy is missing before the last site
  if (run != 0) throw std::invalid_argument("psi_inverse: state has no pile image");
  // piles beyond the boundary stay empty; mass must come out to n
  Configuration c(params, std::move(heights));
  if (c.total_mass() != params.n)
    throw std::invalid_argument("psi_inverse: mass mismatch");
  c.require_valid();
  return c;
}

namespace {

void enumerate_rec(const LatticeParams& params, std::vector<std::int64_t>& prefix,
                   std::int64_t remaining, std::vector<Configuration>& out) {
  int n = params.n;
  int idx = static_cast<int>(prefix.size());
  if (remaining == 0) {
    std::vector<std::int64_t> h = prefix;
    h.resize(n, 0);
    out.emplace_back(params, std::move(h));
    return;
  }
  if (idx >= n) return;
  // each occupied prefix site carries at least one unit
  for (std::int64_t v = 1; v <= remaining; ++v) {
    prefix.push_back(v);
    enumerate_rec(params, prefix, remaining - v, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Configuration> enumerate_states(const LatticeParams& params) {
  std::vector<Configuration> out;
  std::vector<std::int64_t> prefix;
  enumerate_rec(params, prefix, params.n, out);
  std::sort(out.begin(), out.end(), [](const Configuration& a, const Configuration& b) {
    return a.heights() < b.heights();
  });
  return out;
}

namespace {

int index_of(const std::vector<std::vector<std::int64_t>>& keys,
             const std::vector<std::int64_t>& h) {
  auto it = std::lower_bound(keys.begin(), keys.end(), h);
  if (it == keys.end() || *it != h) throw std::logic_error("state not in enumeration");
  return static_cast<int>(it - keys.begin());
}

}  // namespace

RateMatrix build_x_rates(const std::vector<Configuration>& states) {
  std::vector<std::vector<std::int64_t>> keys;
  keys.reserve(states.size());
  for (const auto& s : states) keys.push_back(s.heights());

  RateMatrix q;
  for (int si = 0; si < static_cast<int>(states.size()); ++si) {
    const Configuration& c = states[si];
    int n = c.n();
    for (int j = 0; j < n; ++j) {
      std::int64_t units = rho(c.height(j));
      if (units == 0) continue;
      for (int dir : {-1, 1}) {
        Configuration next = apply_jump(c, j, dir);
        if (next == c) continue;  // reflected, no off-diagonal contribution
        int ti = index_of(keys, next.heights());
        q[{si, ti}].jump_units += units;
      }
    }
    Configuration drifted = apply_drift(c);
    if (!(drifted == c)) {
      int ti = index_of(keys, drifted.heights());
      q[{si, ti}].drift_units += 1;
    }
  }
  return q;
}

RateMatrix build_z_rates(const std::vector<Configuration>& states, bool include_left_hops) {
  std::vector<ExclusionConfiguration> images;
  images.reserve(states.size());
  for (const auto& s : states) images.push_back(psi_map(s));
  std::vector<std::vector<int>> keys;
  keys.reserve(images.size());
  for (const auto& z : images) keys.push_back(z.occupied());
  std::vector<int> order(images.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  auto find_index = [&](const std::vector<int>& occ) {
    auto it = std::lower_bound(order.begin(), order.end(), occ,
                               [&](int a, const std::vector<int>& v) { return keys[a] < v; });
    if (it == order.end() || keys[*it] != occ)
      throw std::logic_error("exclusion state not in the psi image");
    return *it;
  };

  RateMatrix q;
  for (int si = 0; si < static_cast<int>(images.size()); ++si) {
    const ExclusionConfiguration& z = images[si];
    for (const auto& ev : enabled_events(z)) {
      ExclusionConfiguration next = z;
      std::int64_t ju = 0, du = 0;
      switch (ev.kind) {
        case ExclusionEvent::Kind::hop_right:
          next = hop_right(z, ev.edge_site);
          ju = ev.block_len;
          break;
        case ExclusionEvent::Kind::hop_kill:
          next = hop_kill(z);
          ju = ev.block_len;
          break;
        case ExclusionEvent::Kind::hop_left:
          if (!include_left_hops) continue;
          next = hop_left(z, ev.edge_site);
          ju = ev.block_len;
          break;
        case ExclusionEvent::Kind::insert:
          next = drift_insert(z);
          du = 1;
          break;
        case ExclusionEvent::Kind::wall_suppressed:
        case ExclusionEvent::Kind::insert_suppressed:
          continue;  // no state change, no off-diagonal entry
      }
      if (next == z) continue;
      int ti = find_index(next.occupied());
      auto& cell = q[{si, ti}];
      cell.jump_units += ju;
      cell.drift_units += du;
    }
  }
  return q;
}

ConjugacyReport exact_conjugacy_check(const LatticeParams& params, bool include_left_hops) {
  ConjugacyReport rep;
  rep.n = params.n;
  rep.a = params.a;
  auto states = enumerate_states(params);
  rep.n_states = static_cast<int>(states.size());
  RateMatrix qx = build_x_rates(states);
  RateMatrix qz = build_z_rates(states, include_left_hops);

  auto note = [&](const std::pair<int, int>& key, const RatePair& x, const RatePair& z) {
    double d = std::abs(x.value(params.n, params.a) - z.value(params.n, params.a));
    rep.max_discrepancy = std::max(rep.max_discrepancy, d);
    rep.mismatches.push_back({key.first, key.second, x, z});
  };
  for (const auto& [key, x_rate] : qx) {
    auto it = qz.find(key);
    RatePair z_rate = (it == qz.end()) ? RatePair{} : it->second;
    if (!(x_rate == z_rate)) note(key, x_rate, z_rate);
  }
  for (const auto& [key, z_rate] : qz) {
    if (qx.find(key) == qx.end()) note(key, RatePair{}, z_rate);
  }
  rep.exact = rep.mismatches.empty();
  return rep;
}

namespace {

nlohmann::json report_json(const ConjugacyReport& rep,
                           const std::vector<Configuration>* states) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["a"] = rep.a;
  j["n_states"] = rep.n_states;
  j["exact"] = rep.exact;
  j["max_discrepancy"] = rep.max_discrepancy;
  j["mismatches"] = nlohmann::json::array();
  for (const auto& m : rep.mismatches) {
    nlohmann::json e;
    e["from"] = m.from_state;
    e["to"] = m.to_state;
    e["x_rate_units"] = {m.x_rate.jump_units, m.x_rate.drift_units};
    e["z_rate_units"] = {m.z_rate.jump_units, m.z_rate.drift_units};
    if (states) {
      e["from_heights"] = (*states)[m.from_state].heights();
      e["to_heights"] = (*states)[m.to_state].heights();
    }
    j["mismatches"].push_back(e);
  }
  return j;
}

}  // namespace

std::string ConjugacyReport::to_json(const std::vector<Configuration>& states) const {
  return report_json(*this, &states).dump(2);
}

std::string ConjugacyReport::to_json() const { return report_json(*this, nullptr).dump(2); }

}  // namespace elx
