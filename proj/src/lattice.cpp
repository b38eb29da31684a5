#include "elx/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace elx {

using std::numbers::pi;

LatticeParams::LatticeParams(int n_, double a_) : n(n_), a(a_) {
  if (n < 2) throw std::invalid_argument("LatticeParams: n must be >= 2");
  if (a < 0) throw std::invalid_argument("LatticeParams: a must be >= 0");
}

Configuration::Configuration(LatticeParams params, std::vector<std::int64_t> heights)
    : params_(params), heights_(std::move(heights)) {
  if (static_cast<int>(heights_.size()) != params_.n)
    throw std::invalid_argument("Configuration: height vector must have n entries");
  for (auto h : heights_)
    if (h < 0) throw std::invalid_argument("Configuration: negative height");
}

std::int64_t Configuration::total_mass() const {
  std::int64_t s = 0;
  for (auto h : heights_) s += h;
  return s;
}

bool Configuration::is_valid_state() const {
  if (total_mass() != params_.n) return false;
  bool seen_zero = false;
  for (auto h : heights_) {
    if (h == 0) seen_zero = true;
    else if (seen_zero) return false;
  }
  return true;
}

void Configuration::require_valid() const {
  if (!is_valid_state())
    throw std::invalid_argument(
        "Configuration: state must carry mass n on a contiguous left block");
}

int Configuration::first_empty_index() const {
  for (int j = 0; j < params_.n; ++j)
    if (heights_[j] == 0) return j;
  return params_.n;
}

std::string Configuration::to_json() const {
  nlohmann::json j;
  j["N"] = params_.n;
  j["a"] = params_.a;
  j["heights"] = heights_;
  return j.dump();
}

Configuration Configuration::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  LatticeParams p(j.at("N").get<int>(), j.at("a").get<double>());
  return Configuration(p, j.at("heights").get<std::vector<std::int64_t>>());
}

double boundary_S(const Configuration& c) {
  c.require_valid();
  int j = c.first_empty_index();
  return (2.0 * j + 1.0) / (2.0 * c.n());
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& a, const Atom& b) { return a.site < b.site; });
  for (const auto& a : atoms_)
    if (a.mass < 0 || a.site < 0 || a.site > 1)
      throw std::invalid_argument("EmpiricalMeasure: atoms must lie in [0,1] with mass >= 0");
}

EmpiricalMeasure EmpiricalMeasure::from_configuration(const Configuration& c) {
  std::vector<Atom> atoms;
  atoms.reserve(c.heights().size());
  for (int j = 0; j < c.n(); ++j)
    if (c.height(j) > 0)
      atoms.push_back({c.params().site(j),
                       static_cast<double>(c.height(j)) / static_cast<double>(c.n())});
  return EmpiricalMeasure(std::move(atoms));
}

double EmpiricalMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

std::string EmpiricalMeasure::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "site,mass\n";
  for (const auto& a : atoms_) out << a.site << "," << a.mass << "\n";
  return out.str();
}

EmpiricalMeasure EmpiricalMeasure::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Atom> atoms;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first) {
      first = false;
      if (line.find("site") != std::string::npos) continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("EmpiricalMeasure: bad csv row: " + line);
    atoms.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return EmpiricalMeasure(std::move(atoms));
}

TestFunction TestFunction::cosine_mode(int j) {
  if (j < 0) throw std::invalid_argument("cosine_mode: j must be >= 0");
  TestFunction t;
  t.name = "f_" + std::to_string(j);
  if (j == 0) {
    t.f = [](double) { return 1.0; };
    t.df = [](double) { return 0.0; };
    t.ddf = [](double) { return 0.0; };
    return t;
  }
  const double w = j * pi;
  const double amp = std::sqrt(2.0);
  t.f = [w, amp](double x) { return amp * std::cos(w * x); };
  t.df = [w, amp](double x) { return -amp * w * std::sin(w * x); };
  t.ddf = [w, amp](double x) { return -amp * w * w * std::cos(w * x); };
  return t;
}

double pair(const TestFunction& f, const Configuration& c) {
  double acc = 0.0;
  for (int j = 0; j < c.n(); ++j)
    acc += f.f(c.params().site(j)) * static_cast<double>(c.height(j));
  return acc / static_cast<double>(c.n());
}

double pair(const TestFunction& f, const EmpiricalMeasure& m) {
  double acc = 0.0;
  for (const auto& a : m.atoms()) acc += f.f(a.site) * a.mass;
  return acc;
}

double pair(const TestFunction& f, const GridFunction& density) {
  // composite trapezoid; segments are subdivided so coarse grids still
  // resolve the oscillatory cosine modes (the density is linear on each
  // segment, so subdivision loses nothing)
  const double max_width = 1.0 / 512.0;
  const auto& nodes = density.nodes();
  const auto& values = density.values();
  double acc = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    double x0 = nodes[i - 1], x1 = nodes[i];
    if (x1 == x0) continue;
    int panels = std::max(1, static_cast<int>(std::ceil((x1 - x0) / max_width)));
    double prev_x = x0, prev_g = values[i - 1];
    for (int p = 1; p <= panels; ++p) {
      double t = static_cast<double>(p) / panels;
      double x = x0 + (x1 - x0) * t;
      double g = values[i - 1] * (1.0 - t) + values[i] * t;
      acc += 0.5 * (f.f(prev_x) * prev_g + f.f(x) * g) * (x - prev_x);
      prev_x = x;
      prev_g = g;
    }
  }
  return acc;
}

namespace {

template <typename M1, typename M2>
double metric_impl(const M1& m1, const M2& m2, int j_max) {
  double acc = 0.0;
  double weight = 1.0;
  for (int j = 0; j <= j_max; ++j, weight *= 0.5) {
    TestFunction f = TestFunction::cosine_mode(j);
    double diff = std::abs(pair(f, m1) - pair(f, m2));
    acc += weight * std::min(diff, 1.0);
  }
  return acc;
}

}  // namespace

double measure_distance(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2, int j_max) {
  return metric_impl(m1, m2, j_max);
}
double measure_distance(const EmpiricalMeasure& m1, const GridFunction& m2, int j_max) {
  return metric_impl(m1, m2, j_max);
}
double measure_distance(const GridFunction& m1, const GridFunction& m2, int j_max) {
  return metric_impl(m1, m2, j_max);
}

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("mollify: eps must lie in (0, 1/2)");
}

// step function from window counts: breakpoints where any window opens or
// closes, value on each span = sum of masses whose window covers it
GridFunction step_from_windows(const std::vector<Atom>& atoms, double eps,
                               double lo, double hi, bool torus) {
  std::vector<double> cuts{lo, hi};
  for (const auto& a : atoms) {
    double l = a.site - eps, r = a.site + eps;
    if (torus) {
      l = l - std::floor(l);
      r = r - std::floor(r);
    }
    if (l >= lo && l <= hi) cuts.push_back(l);
    if (r >= lo && r <= hi) cuts.push_back(r);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto covered = [&](double x, double site) {
    double d = std::abs(x - site);
    if (torus) d = std::min(d, 1.0 - d);
    return d <= eps;
  };

  std::vector<double> nodes, values;
  nodes.reserve(2 * cuts.size());
  values.reserve(2 * cuts.size());
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    double mid = 0.5 * (cuts[i - 1] + cuts[i]);
    double mass = 0.0;
    for (const auto& a : atoms)
      if (covered(mid, a.site)) mass += a.mass;
    double v = mass / (2.0 * eps);
    nodes.push_back(cuts[i - 1]);
    values.push_back(v);
    nodes.push_back(cuts[i]);
    values.push_back(v);
  }
  return GridFunction(std::move(nodes), std::move(values));
}

// window average of a piecewise-linear density via its antiderivative;
// node set includes every breakpoint shifted by +-eps so kinks are kept
GridFunction window_average_density(const GridFunction& g, double eps, double lo,
                                    double hi, bool torus) {
  double mass = g.integral();
  auto primitive = [&](double x) {
    if (!torus) return g.integral(g.lo(), x);
    double shift = std::floor(x);
    return shift * mass + g.integral(0.0, x - shift);
  };
  std::vector<double> nodes;
  for (double b : g.nodes()) {
    for (double s : {b - eps, b, b + eps}) {
      double x = s;
      if (torus) {
        if (x < lo) x += 1.0;
        if (x > hi) x -= 1.0;
      }
      if (x >= lo && x <= hi) nodes.push_back(x);
    }
  }
  nodes.push_back(lo);
  nodes.push_back(hi);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    values[i] = (primitive(nodes[i] + eps) - primitive(nodes[i] - eps)) / (2.0 * eps);
  return GridFunction(std::move(nodes), std::move(values));
}

}  // namespace

GridFunction mollify_torus(const EmpiricalMeasure& m, double eps) {
  check_eps(eps);
  return step_from_windows(m.atoms(), eps, 0.0, 1.0, /*torus=*/true);
}

GridFunction mollify_torus(const GridFunction& density, double eps) {
  check_eps(eps);
  return window_average_density(density, eps, 0.0, 1.0, /*torus=*/true);
}

GridFunction mollify_line(const EmpiricalMeasure& m, double eps) {
  check_eps(eps);
  return step_from_windows(m.atoms(), eps, -eps, 1.0 + eps, /*torus=*/false);
}

GridFunction mollify_line(const GridFunction& density, double eps) {
  check_eps(eps);
  return window_average_density(density, eps, density.lo() - eps,
                                density.hi() + eps, /*torus=*/false);
}

}  // namespace elx
