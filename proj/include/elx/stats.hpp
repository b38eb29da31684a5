#ifndef ELX_STATS_HPP
#define ELX_STATS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace elx {

// regularized upper incomplete gamma Q(a, x), series/continued-fraction form
double gamma_q(double a, double x);

// p-value of a chi-square statistic with the given degrees of freedom
double chi_square_p(double statistic, int dof);

// Pearson statistic and p-value against expected counts (expected > 0)
struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};
ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                const std::vector<double>& expected);

// two-sample Kolmogorov-Smirnov test with the asymptotic p-value
struct KsResult {
  double statistic = 0;
  double p_value = 1;
};
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

// ordinary least squares fit y ~ intercept + slope t
struct AffineFit {
  double intercept = 0;
  double slope = 0;
  double max_abs_residual = 0;
};
AffineFit fit_affine(const std::vector<double>& t, const std::vector<double>& y);

// sample mean and standard error
struct MeanStderr {
  double mean = 0;
  double stderr_ = 0;
};
MeanStderr mean_stderr(const std::vector<double>& samples);

// FNV-1a over a byte string; used for config hashes in reports
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace elx

#endif
