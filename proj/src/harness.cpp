#include "elx/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "elx/exclusion.hpp"
#include "elx/isomorphism.hpp"
#include "elx/lattice.hpp"
#include "elx/spectral.hpp"
#include "elx/stats.hpp"
#include "elx/zero_range.hpp"
#include "elx/zpde.hpp"

namespace elx {

namespace {

constexpr const char* kToolVersion = "elx-0.1.0";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["process"] = c.process;
  j["n_values"] = c.n_values;
  j["a"] = c.a;
  j["profile"] = c.profile;
  j["t_max"] = c.t_max;
  j["obs_times"] = c.obs_times;
  j["seed_base"] = c.seed_base;
  j["replicas"] = c.replicas;
  j["grid_m"] = c.grid_m;
  j["dt"] = c.dt;
  j["metric_modes"] = c.metric_modes;
  j["h_modes"] = c.h_modes;
  j["workers"] = c.workers;
  j["out_dir"] = c.out_dir;
  return j;
}

}  // namespace

std::string ExperimentConfig::canonical_json() const {
  return config_to_json(*this).dump();  // keys are emitted sorted
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  ExperimentConfig c;
  c.process = j.value("process", c.process);
  if (j.contains("n_values")) c.n_values = j["n_values"].get<std::vector<int>>();
  c.a = j.value("a", c.a);
  c.profile = j.value("profile", c.profile);
  c.t_max = j.value("t_max", c.t_max);
  if (j.contains("obs_times")) c.obs_times = j["obs_times"].get<std::vector<double>>();
  c.seed_base = j.value("seed_base", c.seed_base);
  c.replicas = j.value("replicas", c.replicas);
  c.grid_m = j.value("grid_m", c.grid_m);
  c.dt = j.value("dt", c.dt);
  c.metric_modes = j.value("metric_modes", c.metric_modes);
  c.h_modes = j.value("h_modes", c.h_modes);
  c.workers = j.value("workers", c.workers);
  c.out_dir = j.value("out_dir", c.out_dir);
  return c;
}

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a(canonical_json()); }

GridFunction u0_profile(const std::string& name) {
  if (name == "uniform") return GridFunction::constant(1.0, 0.0, 1.0);
  if (name == "step-half")
    return GridFunction({0.0, 0.5, 0.5, 1.0}, {2.0, 2.0, 0.0, 0.0});
  if (name.rfind("file:", 0) == 0) {
    std::ifstream in(name.substr(5));
    if (!in) throw std::invalid_argument("u0_profile: cannot open " + name.substr(5));
    std::vector<double> xs, ys;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.find("x,") == 0) continue;
      auto comma = line.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("u0_profile: bad csv row " + line);
      xs.push_back(std::stod(line.substr(0, comma)));
      ys.push_back(std::stod(line.substr(comma + 1)));
    }
    return GridFunction(std::move(xs), std::move(ys));
  }
  throw std::invalid_argument("u0_profile: unknown profile " + name);
}

StefanInitial u0_to_stefan(const GridFunction& u0) {
  // support end: the largest node whose value is positive
  double s0 = u0.lo();
  const auto& nodes = u0.nodes();
  const auto& values = u0.values();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (values[i] > 1e-12) s0 = std::max(s0, nodes[i]);
  std::vector<double> vx, vy;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] > s0 + 1e-12) break;
    vx.push_back(nodes[i]);
    vy.push_back(std::max(values[i] - 1.0, 0.0));
  }
  if (vx.empty() || vx.back() < s0 - 1e-12) {
    vx.push_back(s0);
    vy.push_back(std::max(u0(s0) - 1.0, 0.0));
  }
  StefanInitial init;
  init.v0 = GridFunction(std::move(vx), std::move(vy));
  init.s0 = s0;
  return init;
}

double mollify_bandwidth(int n) { return std::pow(static_cast<double>(n), -1.0 / 3.0); }

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ELX_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// run `count` replica jobs on a small pool; results land in caller-indexed
// slots so aggregation order never depends on scheduling
template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  for (auto& th : pool) th.join();
}

struct ReplicaStats {
  // [time][statistic] values for one replica
  std::vector<double> d, l1, l1_raw, h1, d_y, l1_y;
};

std::string provenance_string(const ExperimentConfig& config) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config.config_hash()));
  return std::string(kToolVersion) + "+cfg-" + buf;
}

void append_rows(std::vector<StatRow>& rows, int n, const std::vector<double>& obs,
                 const std::string& name,
                 const std::vector<std::vector<double>>& per_replica_per_time) {
  // per-time rows
  for (std::size_t ti = 0; ti < obs.size(); ++ti) {
    std::vector<double> samples;
    samples.reserve(per_replica_per_time.size());
    for (const auto& rep : per_replica_per_time) samples.push_back(rep[ti]);
    auto ms = mean_stderr(samples);
    rows.push_back({n, obs[ti], name, ms.mean, ms.stderr_,
                    static_cast<int>(samples.size())});
  }
  // sup-over-t row
  std::vector<double> sups;
  sups.reserve(per_replica_per_time.size());
  for (const auto& rep : per_replica_per_time)
    sups.push_back(*std::max_element(rep.begin(), rep.end()));
  auto ms = mean_stderr(sups);
  rows.push_back({n, -1.0, name, ms.mean, ms.stderr_, static_cast<int>(sups.size())});
}

}  // namespace

ConvergenceReport run_convergence_x(const ExperimentConfig& config) {
  GridFunction u0 = u0_profile(config.profile);
  StefanInitial stefan_init = u0_to_stefan(u0);

  StefanParams sp;
  sp.a = config.a;
  sp.t_max = config.t_max;
  sp.grid_m = config.grid_m;
  sp.dt = config.dt;
  StefanSolution reference = solve_stefan(stefan_init, sp, config.obs_times);

  // reference profiles at the observation times, shared read-only
  std::vector<GridFunction> u_ref, v_ref;
  for (double t : config.obs_times) {
    u_ref.push_back(flatten_u(reference, t));
    std::size_t k = reference.slice_index(t);
    double s = reference.s[k];
    std::vector<double> nodes, values;
    for (int i = 0; i <= reference.m; ++i) {
      nodes.push_back(s * i / reference.m);
      values.push_back(reference.v[k][i]);
    }
    if (s < 1.0 - 1e-12) {
      nodes.push_back(1.0);
      values.push_back(0.0);
    }
    v_ref.emplace_back(std::move(nodes), std::move(values));
  }

  ConvergenceReport report;
  report.config = config;
  report.provenance = provenance_string(config);

  int workers = resolve_workers(config.workers);
  const std::size_t n_obs = config.obs_times.size();

  for (int n : config.n_values) {
    LatticeParams params(n, config.a);
    Configuration initial = sample_initial(u0, params);
    double eps = mollify_bandwidth(n);
    std::vector<GridFunction> u_ref_moll, v_ref_moll;
    for (std::size_t ti = 0; ti < n_obs; ++ti) {
      u_ref_moll.push_back(mollify_torus(u_ref[ti], eps));
      v_ref_moll.push_back(mollify_torus(v_ref[ti], eps));
    }

    std::vector<ReplicaStats> results(config.replicas);
    parallel_for(config.replicas, workers, [&](int r) {
      auto states = simulate(initial, config.obs_times,
                             Rng::stream_seed(config.seed_base, r));
      ReplicaStats out;
      for (std::size_t ti = 0; ti < n_obs; ++ti) {
        EmpiricalMeasure emp = EmpiricalMeasure::from_configuration(states[ti]);
        GridFunction emp_moll = mollify_torus(emp, eps);
        out.d.push_back(measure_distance(emp, u_ref[ti], config.metric_modes));
        out.l1.push_back(emp_moll.l1_distance(u_ref_moll[ti]));
        out.l1_raw.push_back(emp_moll.l1_distance(u_ref[ti]));
        out.h1.push_back(h_distance(emp_moll, u_ref[ti], config.h_modes));
        EmpiricalMeasure y_emp = y_empirical(states[ti]);
        out.d_y.push_back(measure_distance(y_emp, v_ref[ti], config.metric_modes));
        GridFunction y_moll = mollify_torus(y_emp, eps);
        out.l1_y.push_back(y_moll.l1_distance(v_ref_moll[ti]));
      }
      results[r] = std::move(out);
    });

    auto collect = [&](auto member) {
      std::vector<std::vector<double>> per;
      per.reserve(results.size());
      for (const auto& res : results) per.push_back(res.*member);
      return per;
    };
    append_rows(report.rows, n, config.obs_times, "d", collect(&ReplicaStats::d));
    append_rows(report.rows, n, config.obs_times, "l1", collect(&ReplicaStats::l1));
    append_rows(report.rows, n, config.obs_times, "l1_raw",
                collect(&ReplicaStats::l1_raw));
    append_rows(report.rows, n, config.obs_times, "h1", collect(&ReplicaStats::h1));
    append_rows(report.rows, n, config.obs_times, "d_y", collect(&ReplicaStats::d_y));
    append_rows(report.rows, n, config.obs_times, "l1_y", collect(&ReplicaStats::l1_y));
  }
  return report;
}

ConvergenceReport run_convergence_z(const ExperimentConfig& config) {
  GridFunction u0 = u0_profile(config.profile);
  StefanInitial stefan_init = u0_to_stefan(u0);

  ZParams zp;
  zp.a = config.a;
  zp.t_max = config.t_max;
  zp.grid_m = config.grid_m;
  zp.dt = config.dt;
  GridFunction z0 = psi_of_profile(stefan_init.v0, stefan_init.s0, config.grid_m);
  ZSolution reference = solve_z(z0, zp, config.obs_times);

  std::vector<GridFunction> z_ref;
  for (double t : config.obs_times)
    z_ref.push_back(reference.slice_function(reference.slice_index(t)));

  ConvergenceReport report;
  report.config = config;
  report.provenance = provenance_string(config);

  int workers = resolve_workers(config.workers);
  const std::size_t n_obs = config.obs_times.size();
  TestFunction f1 = TestFunction::cosine_mode(1);

  for (int n : config.n_values) {
    LatticeParams params(n, config.a);
    Configuration x_initial = sample_initial(u0, params);
    ExclusionConfiguration z_initial = psi_map(x_initial);
    double eps = mollify_bandwidth(n);
    std::vector<GridFunction> z_ref_moll;
    for (std::size_t ti = 0; ti < n_obs; ++ti)
      z_ref_moll.push_back(mollify_torus(z_ref[ti], eps));

    std::vector<ReplicaStats> results(config.replicas);
    // pairing samples for the pushforward comparison (largest lattice only)
    const bool do_pushforward = (n == config.n_values.back());
    std::vector<std::vector<double>> direct_pairings(config.replicas),
        pushforward_pairings(config.replicas);

    parallel_for(config.replicas, workers, [&](int r) {
      auto z_states = simulate_z(z_initial, config.obs_times,
                                 Rng::stream_seed(config.seed_base, 1000000 + r));
      ReplicaStats out;
      std::vector<double> direct;
      for (std::size_t ti = 0; ti < n_obs; ++ti) {
        EmpiricalMeasure emp = z_empirical(z_states[ti]);
        GridFunction emp_moll = mollify_torus(emp, eps);
        out.d.push_back(measure_distance(emp, z_ref[ti], config.metric_modes));
        out.l1.push_back(emp_moll.l1_distance(z_ref_moll[ti]));
        out.l1_raw.push_back(emp_moll.l1_distance(z_ref[ti]));
        out.h1.push_back(h_distance(emp_moll, z_ref[ti], config.h_modes));
        direct.push_back(pair(f1, emp));
      }
      results[r] = std::move(out);
      direct_pairings[r] = std::move(direct);

      if (do_pushforward) {
        auto x_states = simulate(x_initial, config.obs_times,
                                 Rng::stream_seed(config.seed_base, r));
        std::vector<double> pushed;
        for (std::size_t ti = 0; ti < n_obs; ++ti)
          pushed.push_back(pair(f1, z_empirical(psi_map(x_states[ti]))));
        pushforward_pairings[r] = std::move(pushed);
      }
    });

    auto collect = [&](auto member) {
      std::vector<std::vector<double>> per;
      per.reserve(results.size());
      for (const auto& res : results) per.push_back(res.*member);
      return per;
    };
    append_rows(report.rows, n, config.obs_times, "d", collect(&ReplicaStats::d));
    append_rows(report.rows, n, config.obs_times, "l1", collect(&ReplicaStats::l1));
    append_rows(report.rows, n, config.obs_times, "l1_raw",
                collect(&ReplicaStats::l1_raw));
    append_rows(report.rows, n, config.obs_times, "h1", collect(&ReplicaStats::h1));

    // two-sample comparison only on the largest lattice of the ladder
    if (do_pushforward) {
      for (std::size_t ti = 0; ti < n_obs; ++ti) {
        std::vector<double> xs, ys;
        for (int r = 0; r < config.replicas; ++r) {
          xs.push_back(pushforward_pairings[r][ti]);
          ys.push_back(direct_pairings[r][ti]);
        }
        KsResult ks = ks_two_sample(xs, ys);
        report.two_sample.push_back({config.obs_times[ti], ks.statistic, ks.p_value});
      }
    }
  }
  return report;
}

std::string ConvergenceReport::to_json() const {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config.canonical_json());
  j["provenance"] = provenance;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r;
    r["n"] = row.n;
    r["t"] = row.t;
    r["statistic"] = row.statistic;
    r["mean"] = row.mean;
    r["stderr"] = row.stderr_;
    r["replicas"] = row.replicas;
    j["rows"].push_back(r);
  }
  j["two_sample"] = nlohmann::json::array();
  for (const auto& ts : two_sample) {
    nlohmann::json r;
    r["t"] = ts.t;
    r["ks_statistic"] = ts.ks_statistic;
    r["p_value"] = ts.p_value;
    j["two_sample"].push_back(r);
  }
  return j.dump(2);
}

ConvergenceReport ConvergenceReport::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  ConvergenceReport rep;
  rep.config = ExperimentConfig::from_json(j.at("config").dump());
  rep.provenance = j.at("provenance").get<std::string>();
  for (const auto& r : j.at("rows"))
    rep.rows.push_back({r.at("n").get<int>(), r.at("t").get<double>(),
                        r.at("statistic").get<std::string>(), r.at("mean").get<double>(),
                        r.at("stderr").get<double>(), r.at("replicas").get<int>()});
  for (const auto& r : j.at("two_sample"))
    rep.two_sample.push_back({r.at("t").get<double>(), r.at("ks_statistic").get<double>(),
                              r.at("p_value").get<double>()});
  return rep;
}

std::string ConvergenceReport::to_csv() const {
  std::string out = "process,n,t,statistic,mean,stderr,replicas\n";
  for (const auto& row : rows) {
    out += config.process + "," + std::to_string(row.n) + ",";
    out += (row.t < 0 ? std::string("sup") : format_double(row.t)) + ",";
    out += row.statistic + "," + format_double(row.mean) + "," +
           format_double(row.stderr_) + "," + std::to_string(row.replicas) + "\n";
  }
  return out;
}

double ConvergenceReport::sup_mean(int n, const std::string& statistic) const {
  for (const auto& row : rows)
    if (row.n == n && row.t < 0 && row.statistic == statistic) return row.mean;
  throw std::invalid_argument("sup_mean: row not found");
}

std::vector<std::string> write_report_files(const ConvergenceReport& report,
                                            const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::string json_path = out_dir + "/summary.json";
  std::string csv_path = out_dir + "/report.csv";
  {
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("write_report_files: cannot write " + json_path);
    out << report.to_json() << "\n";
  }
  {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("write_report_files: cannot write " + csv_path);
    out << report.to_csv();
  }
  return {json_path, csv_path};
}

}  // namespace elx
