#ifndef ELX_ISOMORPHISM_HPP
#define ELX_ISOMORPHISM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "elx/exclusion.hpp"
#include "elx/lattice.hpp"
#include "elx/zero_range.hpp"

namespace elx {

// image of the occupied sites under U(x) = x + (1/n) sum_{z<=x} rho(eta_z),
// kept as exact index pairs: site j maps to index j + prefix_rho(j)
struct SiteMap {
  std::vector<int> from;  // occupied site indexes, x < S
  std::vector<int> to;    // their U-images
};

SiteMap u_map(const Configuration& c);

// vacancies exactly at the U-image, everything else occupied
ExclusionConfiguration psi_map(const Configuration& c);

// T(y) = y - (1/n) sum_{z<y} Z_z, as an index map on the whole lattice
int t_map_index(const ExclusionConfiguration& z, int y_index);
double t_map(const ExclusionConfiguration& z, double y_site);

// reconstructs the pile state from its exclusion image (inverse of psi_map)
Configuration psi_inverse(const ExclusionConfiguration& z, const LatticeParams& params);

// every valid state of the pile process, in lexicographic height order
std::vector<Configuration> enumerate_states(const LatticeParams& params);

// transition rate as exact integer multiples: rate = jump_units * n^2 +
// drift_units * a * n. Conjugacy holds exactly or not at all.
struct RatePair {
  std::int64_t jump_units = 0;
  std::int64_t drift_units = 0;
  bool operator==(const RatePair&) const = default;
  double value(int n, double a) const {
    return static_cast<double>(jump_units) * n * n +
           static_cast<double>(drift_units) * a * n;
  }
};

// sparse rate matrix over an enumerated state space
using RateMatrix = std::map<std::pair<int, int>, RatePair>;

// exact generator of the pile process over the enumeration
RateMatrix build_x_rates(const std::vector<Configuration>& states);
// exact generator of the exclusion process over the psi-image of the same
// enumeration; left hops can be disabled to exhibit the broken conjugacy
RateMatrix build_z_rates(const std::vector<Configuration>& states,
                         bool include_left_hops = true);

struct ConjugacyMismatch {
  int from_state = 0;
  int to_state = 0;
  RatePair x_rate;
  RatePair z_rate;
};

struct ConjugacyReport {
  int n = 0;
  double a = 0;
  int n_states = 0;
  bool exact = false;
  double max_discrepancy = 0;  // numeric, for the given a
  std::vector<ConjugacyMismatch> mismatches;
  std::string to_json(const std::vector<Configuration>& states) const;
  std::string to_json() const;
};

// enumerates the state space (n <= ~12 is practical; the CLI guards at 10),
// builds both exact generators and compares them entry by entry through psi
ConjugacyReport exact_conjugacy_check(const LatticeParams& params,
                                      bool include_left_hops = true);

}  // namespace elx

#endif
