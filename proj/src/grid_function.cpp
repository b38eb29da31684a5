#include "elx/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elx {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1,1]
constexpr double kGlNode[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

}  // namespace

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2 || nodes_.size() != values_.size())
    throw std::invalid_argument("GridFunction: need matching node/value lists");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (nodes_[i] < nodes_[i - 1])
      throw std::invalid_argument("GridFunction: nodes must be non-decreasing");
}

GridFunction GridFunction::constant(double value, double lo, double hi) {
  return GridFunction({lo, hi}, {value, value});
}

GridFunction GridFunction::sampled(const std::function<double(double)>& f,
                                   double lo, double hi, std::size_t cells) {
  std::vector<double> x(cells + 1), y(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
    y[i] = f(x[i]);
  }
  return GridFunction(std::move(x), std::move(y));
}

double GridFunction::operator()(double x) const {
  if (x < nodes_.front() || x > nodes_.back()) return 0.0;
  // first segment whose right node is >= x; skip zero-width jump segments by
  // preferring the rightmost node equal to x (right continuity)
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  if (it == nodes_.begin()) return values_.front();
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  if (i == nodes_.size()) return values_.back();
  double x0 = nodes_[i - 1], x1 = nodes_[i];
  if (x1 == x0) return values_[i];
  double t = (x - x0) / (x1 - x0);
  return values_[i - 1] * (1.0 - t) + values_[i] * t;
}

double GridFunction::integral() const {
  double acc = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    acc += 0.5 * (values_[i] + values_[i - 1]) * (nodes_[i] - nodes_[i - 1]);
  return acc;
}

double GridFunction::integral(double a, double b) const {
  if (b <= a) return 0.0;
  a = std::max(a, nodes_.front());
  b = std::min(b, nodes_.back());
  if (b <= a) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    double x0 = nodes_[i - 1], x1 = nodes_[i];
    if (x1 <= a || x0 >= b || x1 == x0) continue;
    double lo = std::max(x0, a), hi = std::min(x1, b);
    double v_lo = values_[i - 1] + (values_[i] - values_[i - 1]) * (lo - x0) / (x1 - x0);
    double v_hi = values_[i - 1] + (values_[i] - values_[i - 1]) * (hi - x0) / (x1 - x0);
    acc += 0.5 * (v_lo + v_hi) * (hi - lo);
  }
  return acc;
}

namespace {

// integral of |c0 + (c1-c0) t| * len over t in [0,1]
double abs_segment_integral(double c0, double c1, double len) {
  if (c0 * c1 >= 0.0) return 0.5 * std::abs(c0 + c1) * len;
  double root = c0 / (c0 - c1);  // in (0,1)
  return 0.5 * len * (std::abs(c0) * root + std::abs(c1) * (1.0 - root));
}

}  // namespace

double GridFunction::l1_distance(const GridFunction& other) const {
  std::vector<double> cuts;
  cuts.reserve(nodes_.size() + other.nodes_.size());
  cuts.insert(cuts.end(), nodes_.begin(), nodes_.end());
  cuts.insert(cuts.end(), other.nodes_.begin(), other.nodes_.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    double x0 = cuts[i - 1], x1 = cuts[i];
    if (x1 == x0) continue;
    // evaluate the difference just inside the interval so jumps at the cut
    // points do not contaminate neighbouring segments
    double eps = (x1 - x0) * 1e-12;
    double d0 = (*this)(x0 + eps) - other(x0 + eps);
    double d1 = (*this)(x1 - eps) - other(x1 - eps);
    acc += abs_segment_integral(d0, d1, x1 - x0);
  }
  return acc;
}

double GridFunction::linf_distance(const GridFunction& other) const {
  std::vector<double> cuts;
  cuts.insert(cuts.end(), nodes_.begin(), nodes_.end());
  cuts.insert(cuts.end(), other.nodes_.begin(), other.nodes_.end());
  std::sort(cuts.begin(), cuts.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    worst = std::max(worst, std::abs((*this)(cuts[i]) - other(cuts[i])));
    if (i + 1 < cuts.size()) {
      double mid = 0.5 * (cuts[i] + cuts[i + 1]);
      worst = std::max(worst, std::abs((*this)(mid)-other(mid)));
    }
  }
  return worst;
}

double GridFunction::pair_trapezoid(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    double x0 = nodes_[i - 1], x1 = nodes_[i];
    if (x1 == x0) continue;
    acc += 0.5 * (f(x0) * values_[i - 1] + f(x1) * values_[i]) * (x1 - x0);
  }
  return acc;
}

double GridFunction::pair_gauss(const std::function<double(double)>& f,
                                double max_panel_width) const {
  double acc = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    double x0 = nodes_[i - 1], x1 = nodes_[i];
    if (x1 == x0) continue;
    int panels = std::max(1, static_cast<int>(std::ceil((x1 - x0) / max_panel_width)));
    double w = (x1 - x0) / panels;
    for (int p = 0; p < panels; ++p) {
      double a = x0 + p * w, mid = a + 0.5 * w, half = 0.5 * w;
      for (int q = 0; q < 8; ++q) {
        double x = mid + half * kGlNode[q];
        double t = (x - x0) / (x1 - x0);
        double g = values_[i - 1] * (1.0 - t) + values_[i] * t;
        acc += kGlWeight[q] * half * f(x) * g;
      }
    }
  }
  return acc;
}

GridFunction GridFunction::apply(const std::function<double(double)>& op) const {
  std::vector<double> y(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) y[i] = op(values_[i]);
  return GridFunction(nodes_, std::move(y));
}

CubicHermite::CubicHermite(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  std::size_t n = nodes_.size();
  if (n < 5 || values_.size() != n)
    throw std::invalid_argument("CubicHermite: need at least 5 samples");
  slopes_.resize(n);
  // fourth-order slopes; one-sided five-point stencils at the edges.
  // Stencils assume near-uniform spacing, which holds for all callers.
  double h = (nodes_.back() - nodes_.front()) / static_cast<double>(n - 1);
  auto d = [&](std::size_t i) { return values_[i]; };
  slopes_[0] = (-25 * d(0) + 48 * d(1) - 36 * d(2) + 16 * d(3) - 3 * d(4)) / (12 * h);
  slopes_[1] = (-3 * d(0) - 10 * d(1) + 18 * d(2) - 6 * d(3) + d(4)) / (12 * h);
  for (std::size_t i = 2; i + 2 < n; ++i)
    slopes_[i] = (d(i - 2) - 8 * d(i - 1) + 8 * d(i + 1) - d(i + 2)) / (12 * h);
  slopes_[n - 2] = (3 * d(n - 1) + 10 * d(n - 2) - 18 * d(n - 3) + 6 * d(n - 4) - d(n - 5)) / (12 * h);
  slopes_[n - 1] = (25 * d(n - 1) - 48 * d(n - 2) + 36 * d(n - 3) - 16 * d(n - 4) + 3 * d(n - 5)) / (12 * h);
  for (std::size_t i = 1; i < n; ++i)
    if (nodes_[i] <= nodes_[i - 1])
      throw std::invalid_argument("CubicHermite: nodes must increase");
  cum_.resize(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double hi = nodes_[i] - nodes_[i - 1];
    cum_[i] = cum_[i - 1] + 0.5 * hi * (values_[i - 1] + values_[i]) +
              hi * hi * (slopes_[i - 1] - slopes_[i]) / 12.0;
  }
}

CubicHermite::CubicHermite(std::vector<double> nodes, std::vector<double> values,
                           std::vector<double> slopes)
    : nodes_(std::move(nodes)), values_(std::move(values)), slopes_(std::move(slopes)) {
  std::size_t n = nodes_.size();
  if (n < 2 || values_.size() != n || slopes_.size() != n)
    throw std::invalid_argument("CubicHermite: size mismatch");
  for (std::size_t i = 1; i < n; ++i)
    if (nodes_[i] <= nodes_[i - 1])
      throw std::invalid_argument("CubicHermite: nodes must increase");
  cum_.resize(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double hi = nodes_[i] - nodes_[i - 1];
    cum_[i] = cum_[i - 1] + 0.5 * hi * (values_[i - 1] + values_[i]) +
              hi * hi * (slopes_[i - 1] - slopes_[i]) / 12.0;
  }
}

std::size_t CubicHermite::segment(double x) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  if (i == 0) return 0;
  if (i >= nodes_.size()) return nodes_.size() - 2;
  return i - 1;
}

double CubicHermite::operator()(double x) const {
  std::size_t i = segment(x);
  double h = nodes_[i + 1] - nodes_[i];
  double t = (x - nodes_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * values_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
         (-2 * t3 + 3 * t2) * values_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

double CubicHermite::derivative(double x) const {
  std::size_t i = segment(x);
  double h = nodes_[i + 1] - nodes_[i];
  double t = (x - nodes_[i]) / h;
  return ((6 * t * t - 6 * t) * values_[i] + (3 * t * t - 4 * t + 1) * h * slopes_[i] +
          (-6 * t * t + 6 * t) * values_[i + 1] + (3 * t * t - 2 * t) * h * slopes_[i + 1]) /
         h;
}

double CubicHermite::antiderivative(double x) const {
  std::size_t i = segment(x);
  double h = nodes_[i + 1] - nodes_[i];
  double t = (x - nodes_[i]) / h;
  double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  double seg = h * ((0.5 * t4 - t3 + t) * values_[i] +
                    (0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2) * h * slopes_[i] +
                    (-0.5 * t4 + t3) * values_[i + 1] +
                    (0.25 * t4 - t3 / 3.0) * h * slopes_[i + 1]);
  return cum_[i] + seg;
}

double CubicHermite::inverse(double y) const {
  bool increasing = values_.back() > values_.front();
  double lo = nodes_.front(), hi = nodes_.back();
  double f_lo = values_.front(), f_hi = values_.back();
  if (increasing) {
    if (y <= f_lo) return lo;
    if (y >= f_hi) return hi;
  } else {
    if (y >= f_lo) return lo;
    if (y <= f_hi) return hi;
  }
  // bisection with Newton acceleration
  double x = lo + (hi - lo) * (y - f_lo) / (f_hi - f_lo);
  for (int iter = 0; iter < 100; ++iter) {
    double fx = (*this)(x);
    double err = fx - y;
    if (std::abs(err) < 1e-15 * (1.0 + std::abs(y))) break;
    if ((err > 0) == increasing)
      hi = x;
    else
      lo = x;
    double dfx = derivative(x);
    double step = (dfx != 0.0) ? x - err / dfx : 0.5 * (lo + hi);
    x = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
  }
  return x;
}

}  // namespace elx
