#ifndef ELX_GRID_FUNCTION_HPP
#define ELX_GRID_FUNCTION_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace elx {

// Piecewise-linear function on an interval, stored as node/value pairs with
// non-decreasing nodes. A repeated node encodes a jump discontinuity, which
// is how solver profiles carry the unit-height step at the free boundary.
// Evaluation is right-continuous at jumps.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(std::vector<double> nodes, std::vector<double> values);

  static GridFunction constant(double value, double lo = 0.0, double hi = 1.0);
  static GridFunction sampled(const std::function<double(double)>& f, double lo,
                              double hi, std::size_t cells);

  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double x) const;
  double integral() const;
  double integral(double a, double b) const;

  // exact L1 distance between two piecewise-linear functions; outside either
  // domain the function is treated as zero
  double l1_distance(const GridFunction& other) const;
  double linf_distance(const GridFunction& other) const;

  // trapezoid rule on this function's own nodes
  double pair_trapezoid(const std::function<double(double)>& f) const;

  // piecewise Gauss-Legendre quadrature of f(x)*g(x); panels never straddle a
  // node, with at most max_panel_width per panel. Used where trapezoid error
  // would swamp the quantity under test (oscillatory f).
  double pair_gauss(const std::function<double(double)>& f,
                    double max_panel_width) const;

  GridFunction apply(const std::function<double(double)>& op) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
};

// C^1 interpolant with slopes recovered from the samples (fourth order on a
// uniform grid). Used by the v <-> z transform pair, where second-order
// interpolation cannot reach the required round-trip accuracy.
class CubicHermite {
 public:
  CubicHermite() = default;
  // nodes strictly increasing; slopes computed by finite differences
  CubicHermite(std::vector<double> nodes, std::vector<double> values);
  // nodes strictly increasing; slopes supplied by the caller
  CubicHermite(std::vector<double> nodes, std::vector<double> values,
               std::vector<double> slopes);

  double operator()(double x) const;
  double derivative(double x) const;

  // antiderivative with F(nodes.front()) = 0, exact for the interpolant
  double antiderivative(double x) const;

  // solve (*this)(x) = y for a strictly monotone interpolant
  double inverse(double y) const;

  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  std::vector<double> cum_;  // antiderivative at nodes
};

}  // namespace elx

#endif
