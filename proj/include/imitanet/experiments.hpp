#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "imitanet/parallel.hpp"

namespace imitanet {

/// One experiment sweep. The swept grid is n x (radius or deg_exp) x p x v,
/// with `instances` random instances per grid point.
struct ExperimentConfig {
  std::string experiment = "size_sweep";
  std::vector<std::size_t> n_values{10, 20, 30, 40, 50};
  std::vector<double> deg_exp_values{4.0};
  std::vector<double> radius_values;  // overrides deg_exp_values when set
  std::vector<double> p_values{1.0};
  std::vector<double> v_values{0.5};
  std::size_t instances = 100;
  std::vector<std::string> policies{"rand", "deg", "iro", "ipo", "ime", "ipro"};
  std::uint64_t seed = 1;
  double epsilon = 1e-9;
  double alpha = 1.0;
  double beta = 1.0;
  double timeout_seconds = 60.0;  // per instance, exhaustive search only
  bool timing = false;            // write measured wall_time instead of 0
  bool require_connected = false;

  /// Defaults for uniform_vs_targeted | size_sweep | connectivity | variance
  /// | table1.
  static ExperimentConfig defaults(const std::string& experiment);
  /// Throws ArgumentError on an empty list, zero instances or unknown ids.
  void validate() const;
};

/// Overlays keys present in `j` onto defaults(j["experiment"]).
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct ResultRow {
  std::string experiment;
  std::uint64_t instance_seed = 0;
  std::size_t n = 0;
  double radius = 0.0;
  double p = 0.0;
  double v = 0.0;
  std::string policy;
  double total_cost = 0.0;
  double mean_incentive = 0.0;  // total_cost / n
  std::size_t num_A = 0;
  std::size_t iterations = 0;
  double wall_time = 0.0;
  std::string error;  // empty when the row succeeded
};

struct InstanceMeta {
  std::string experiment;
  std::uint64_t instance_seed = 0;
  std::size_t n = 0;
  double radius = 0.0;
  std::size_t components = 0;
  std::size_t initial_A = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<InstanceMeta> instances;
};

/// Rows ordered by (instance, policy) as configured. Deterministic in the
/// config unless `timing` is set or a timeout fires.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                Execution exec = Execution::Parallel);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& is);
nlohmann::json instances_to_json(const std::vector<InstanceMeta>& meta);

struct SummaryCell {
  std::string experiment;
  std::string policy;
  std::size_t count = 0;
  std::size_t excluded = 0;  // rows with an error
  double mean = 0.0;         // of mean_incentive
  double std_error = 0.0;
};

/// Groups by (experiment, policy); error rows are excluded and counted.
/// Throws ArgumentError on empty input.
std::vector<SummaryCell> summarize(const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<SummaryCell>& cells);
/// Policy rows by experiment columns, mean +- standard error.
std::string format_summary_text(const std::vector<SummaryCell>& cells);

/// Canonical display order: uniform, rand, deg, iro, ipo, ime, ipro, opt.
int policy_rank(const std::string& policy);

}  // namespace imitanet
