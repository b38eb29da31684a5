#ifndef ELX_HARNESS_HPP
#define ELX_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "elx/grid_function.hpp"
#include "elx/stefan.hpp"

namespace elx {

struct ExperimentConfig {
  std::string process = "X";  // "X" or "Z"
  std::vector<int> n_values = {32, 64, 128, 256};
  double a = 1.0;
  std::string profile = "step-half";  // u0 profile name or "file:<path>"
  double t_max = 0.25;
  std::vector<double> obs_times = {0.05, 0.10, 0.15, 0.20, 0.25};
  std::uint64_t seed_base = 20240601;
  int replicas = 100;
  int grid_m = 400;     // reference solver grid
  double dt = 1e-5;     // reference solver step
  int metric_modes = 64;
  int h_modes = 64;
  int workers = 0;      // 0: use ELX_WORKERS, else hardware count
  std::string out_dir = "out";

  std::string canonical_json() const;
  static ExperimentConfig from_json(const std::string& text);
  std::uint64_t config_hash() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// initial density profiles for the pile process: mass one, at least one on a
// left block. "uniform": u0 = 1; "step-half": u0 = 2 on [0, 1/2]
GridFunction u0_profile(const std::string& name);
// moving-boundary data (rho(u0), support end) derived from the density
StefanInitial u0_to_stefan(const GridFunction& u0);

// mollification bandwidth of the comparison pipeline
double mollify_bandwidth(int n);

struct StatRow {
  int n = 0;
  double t = 0;            // observation time; sup rows use t = -1
  std::string statistic;   // d, l1, l1_raw, h1, d_y, l1_y
  double mean = 0;
  double stderr_ = 0;
  int replicas = 0;
  bool operator==(const StatRow&) const = default;
};

struct TwoSampleRow {
  double t = 0;
  double ks_statistic = 0;
  double p_value = 1;
  bool operator==(const TwoSampleRow&) const = default;
};

struct ConvergenceReport {
  ExperimentConfig config;
  std::string provenance;  // tool version + config hash
  std::vector<StatRow> rows;
  std::vector<TwoSampleRow> two_sample;  // Z runs only

  std::string to_json() const;
  static ConvergenceReport from_json(const std::string& text);
  std::string to_csv() const;
  bool operator==(const ConvergenceReport&) const = default;

  // mean of the per-replica sup-over-t statistic for one n
  double sup_mean(int n, const std::string& statistic) const;
};

// ensemble experiment for the pile process against the moving-boundary
// reference (distance metric, mollified L1, spectral distance, and the same
// for the projected particle picture)
ConvergenceReport run_convergence_x(const ExperimentConfig& config);

// ensemble experiment for the exclusion process against the fixed-domain
// reference, plus the pushforward-vs-direct two-sample comparison
ConvergenceReport run_convergence_z(const ExperimentConfig& config);

// writes summary.json and report.csv under out_dir; returns the file paths
std::vector<std::string> write_report_files(const ConvergenceReport& report,
                                            const std::string& out_dir);

int resolve_workers(int requested);

}  // namespace elx

#endif
