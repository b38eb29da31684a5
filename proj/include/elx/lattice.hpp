#ifndef ELX_LATTICE_HPP
#define ELX_LATTICE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "elx/grid_function.hpp"

namespace elx {

// non-negative part shift: rho(n) = max(n-1, 0)
inline std::int64_t rho(std::int64_t n) { return n > 1 ? n - 1 : 0; }

struct LatticeParams {
  int n = 2;        // number of sites; sites sit at (2j+1)/(2n)
  double a = 0.0;   // boundary drive rate (events at rate a*n)

  LatticeParams() = default;
  LatticeParams(int n_, double a_);
  double site(int j) const { return (2.0 * j + 1.0) / (2.0 * n); }
};

// Occupancy vector over the staggered lattice. The valid states carry total
// mass n with all occupied sites forming a prefix of the lattice.
class Configuration {
 public:
  Configuration() = default;
  Configuration(LatticeParams params, std::vector<std::int64_t> heights);

  const LatticeParams& params() const { return params_; }
  int n() const { return params_.n; }
  const std::vector<std::int64_t>& heights() const { return heights_; }
  std::int64_t height(int j) const { return heights_[j]; }

  std::int64_t total_mass() const;
  bool is_valid_state() const;  // mass n + contiguous support
  void require_valid() const;   // throws std::invalid_argument otherwise

  // index of the first empty site, n if none
  int first_empty_index() const;

  std::string to_json() const;
  static Configuration from_json(const std::string& text);

  bool operator==(const Configuration& other) const {
    return params_.n == other.params_.n && heights_ == other.heights_;
  }

 private:
  LatticeParams params_;
  std::vector<std::int64_t> heights_;
};

// smallest empty site of a valid state; (2n+1)/2n when every site is occupied
double boundary_S(const Configuration& c);

struct Atom {
  double site;
  double mass;
};

// atomic measure on [0,1], atoms sorted by site
class EmpiricalMeasure {
 public:
  EmpiricalMeasure() = default;
  explicit EmpiricalMeasure(std::vector<Atom> atoms);
  static EmpiricalMeasure from_configuration(const Configuration& c);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const;

  std::string to_csv() const;
  static EmpiricalMeasure from_csv(const std::string& text);

 private:
  std::vector<Atom> atoms_;
};

// C^2 test function with vanishing end derivatives, carried as callables
struct TestFunction {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> ddf;
  std::string name;

  // f_0 = 1, f_j = sqrt(2) cos(j pi x)
  static TestFunction cosine_mode(int j);
};

// <f, eta>_N = (1/n) sum f(x) eta_x
double pair(const TestFunction& f, const Configuration& c);
double pair(const TestFunction& f, const EmpiricalMeasure& m);
double pair(const TestFunction& f, const GridFunction& density);

// metric d(mu,nu) built on the cosine family, truncated at mode J
// (tail below 2^-J; J = 64 leaves no representable remainder)
inline constexpr int kMetricModes = 64;
double measure_distance(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2,
                        int j_max = kMetricModes);
double measure_distance(const EmpiricalMeasure& m1, const GridFunction& m2,
                        int j_max = kMetricModes);
double measure_distance(const GridFunction& m1, const GridFunction& m2,
                        int j_max = kMetricModes);

// window average (1/2eps) mu([x-eps, x+eps]) with the measure wrapped on the
// torus identifying 0 and 1; result is an exact step function on [0,1]
GridFunction mollify_torus(const EmpiricalMeasure& m, double eps);
GridFunction mollify_torus(const GridFunction& density, double eps);

// same window average with the measure viewed on the line; support widens to
// [-eps, 1+eps]
GridFunction mollify_line(const EmpiricalMeasure& m, double eps);
GridFunction mollify_line(const GridFunction& density, double eps);

}  // namespace elx

#endif
