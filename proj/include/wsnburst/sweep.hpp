#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wsnburst/config.hpp"
#include "wsnburst/engine.hpp"
#include "wsnburst/topology.hpp"

namespace wsnburst::experiments {

struct SweepRow {
  int case_id = 0;
  int N = 0;
  double b = 0.0;
  std::string on_kind;
  int T = 0;  // TPT truncation; 1 for exp, 0 for pareto
  std::string off_kind;
  int day = 0;
  std::string entity;
  double mpd_s = 0.0;
  double e2e_delay_s = 0.0;
  double throughput_pps = 0.0;
  double overflow_prob = 0.0;
  bool saturated = false;
  std::uint64_t seed = 0;
  std::string status = "ok";
};

struct SweepPoint {
  int N;
  double b;
};

// N-major, then b ascending.
std::vector<SweepPoint> sweep_points(const SimConfig& config);

// Measured entities per replication, in row order.
std::vector<std::string> entity_names(int case_id);
int entity_count(int case_id);

topology::TopologySpec topology_for(const SimConfig& config, int N);
std::vector<sim::ClusterTraffic> traffic_for(const SimConfig& config, const topology::TopologySpec& topo, int N,
                                             double b);

// Replication seed of `day`: derive_seed(master, day). Shared by every sweep
// point so that points of one day see common random numbers.
std::uint64_t day_seed(std::uint64_t master, int day);

sim::RunConfig run_config_for(const SimConfig& config);

struct SweepOptions {
  int parallel = 1;
  bool write_files = true;  // results.csv, summary.csv, plots/, run_manifest.json
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct SweepOutput {
  std::vector<SweepRow> rows;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

SweepOutput run_sweep(const SimConfig& config, const SweepOptions& options = {});

// Fixed notation with 9 significant digits.
std::string format_number(double x);

std::string results_csv(const std::vector<SweepRow>& rows);
// Across-day mean/min/max/CV per (sweep point, entity, metric), computed
// from the values as printed in results.csv.
std::string summary_csv(const std::vector<SweepRow>& rows);

inline constexpr const char* kResultsHeader =
    "case,N,b,on_kind,T,off_kind,day,entity,mpd_s,e2e_delay_s,throughput_pps,overflow_prob,saturated,seed,status";
inline constexpr const char* kSummaryHeader = "case,N,b,on_kind,T,off_kind,entity,metric,days,mean,min,max,cv";

}  // namespace wsnburst::experiments
