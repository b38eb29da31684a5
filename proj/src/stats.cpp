#include "elx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace elx {

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double chi_square_p(double statistic, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_p: dof must be positive");
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi_square_test: size mismatch");
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0)
      throw std::invalid_argument("chi_square_test: expected counts must be positive");
    double d = observed[i] - expected[i];
    r.statistic += d * d / expected[i];
  }
  r.dof = static_cast<int>(observed.size()) - 1;
  r.p_value = chi_square_p(r.statistic, r.dof);
  return r;
}

KsResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    double xv = x[i], yv = y[j];
    if (xv <= yv) ++i;
    if (yv <= xv) ++j;
    double fx = static_cast<double>(i) / x.size();
    double fy = static_cast<double>(j) / y.size();
    d = std::max(d, std::abs(fx - fy));
  }
  double ne = static_cast<double>(x.size()) * y.size() / (x.size() + y.size());
  double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  // asymptotic Kolmogorov tail
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  KsResult r;
  r.statistic = d;
  r.p_value = std::clamp(2.0 * p, 0.0, 1.0);
  return r;
}

AffineFit fit_affine(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2)
    throw std::invalid_argument("fit_affine: need matching samples");
  double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  double denom = n * stt - st * st;
  AffineFit fit;
  fit.slope = (n * sty - st * sy) / denom;
  fit.intercept = (sy - fit.slope * st) / n;
  for (std::size_t i = 0; i < t.size(); ++i)
    fit.max_abs_residual = std::max(
        fit.max_abs_residual, std::abs(y[i] - fit.intercept - fit.slope * t[i]));
  return fit;
}

MeanStderr mean_stderr(const std::vector<double>& samples) {
  MeanStderr r;
  if (samples.empty()) return r;
  double n = static_cast<double>(samples.size());
  for (double v : samples) r.mean += v;
  r.mean /= n;
  if (samples.size() < 2) return r;
  double ss = 0;
  for (double v : samples) ss += (v - r.mean) * (v - r.mean);
  r.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  return r;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace elx
