#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wsnburst/model.hpp"

namespace wsnburst::experiments {

struct BGrid {
  double start = 0.05;
  double stop = 0.95;
  double step = 0.05;

  // start, start+step, ... up to stop (inclusive, 1e-9 slack), rounded to 1e-12.
  std::vector<double> values() const;
};

struct SimConfig {
  int case_id = 1;
  std::vector<int> node_counts;
  BGrid b_grid;
  model::PeriodLaw on_law;
  model::PeriodLaw off_law;
  model::EmissionMode emission = model::EmissionMode::ConstantPeakRate;
  double n_p = 50.0;
  double lambda_total = 50.0;  // case 1: at the sink; cases 2/3: per cluster
  std::optional<double> rho;
  std::optional<double> v;
  double threshold = 1000.0;
  double horizon_s = 90000.0;
  double warmup_s = 3600.0;
  int days = 10;
  std::uint64_t seed = 1;
  std::string output_dir;
  std::optional<double> sink_service_rate;
  bool trace = false;

  // rho if given, else lambda_total / v, else 0.5.
  double utilization() const;
  // v if given, else lambda_total / utilization().
  double service_rate() const;
};

// Throws ConfigError naming the offending field.
void validate(const SimConfig& config);

// Unknown keys are rejected; omitted optional keys take the defaults above.
SimConfig parse_config(const nlohmann::json& j);

// Parse errors carry the byte position; validation errors name the field.
SimConfig load_config(const std::string& path);

nlohmann::json to_json(const SimConfig& config);

// "exp" | "pareto" | "tpt" or {"kind": .., "alpha": .., "theta": .., "T": ..}
model::PeriodLaw period_law_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json to_json(const model::PeriodLaw& law);

}  // namespace wsnburst::experiments
