#include "wsnburst/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "wsnburst/errors.hpp"
#include "wsnburst/metrics.hpp"
#include "wsnburst/plotdata.hpp"

namespace wsnburst::experiments {

namespace fs = std::filesystem;

namespace {

int truncation_column(const model::PeriodLaw& law) {
  switch (law.family) {
    case model::PeriodLaw::Family::Exponential:
      return 1;
    case model::PeriodLaw::Family::Pareto:
      return 0;
    case model::PeriodLaw::Family::Tpt:
      return law.truncation;
  }
  return 0;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

std::vector<SweepPoint> sweep_points(const SimConfig& config) {
  std::vector<SweepPoint> points;
  for (int n : config.node_counts)
    for (double b : config.b_grid.values()) points.push_back({n, b});
  return points;
}

std::vector<std::string> entity_names(int case_id) {
  switch (case_id) {
    case 1:
      return {"sink"};
    case 2:
      return {"cluster1", "cluster2", "sink"};
    case 3:
      return {"cluster1", "cluster2", "cluster3", "sink"};
  }
  throw DomainError("unknown case " + std::to_string(case_id));
}

int entity_count(int case_id) { return static_cast<int>(entity_names(case_id).size()); }

topology::TopologySpec topology_for(const SimConfig& config, int N) {
  switch (config.case_id) {
    case 1:
      return topology::build_star(N, config.lambda_total, config.service_rate(), config.threshold);
    case 2:
      return topology::build_case2(N, config.lambda_total, config.utilization(), config.threshold,
                                   config.sink_service_rate);
    case 3:
      return topology::build_case3(N, config.lambda_total, config.utilization(), config.threshold,
                                   config.sink_service_rate);
  }
  throw DomainError("unknown case " + std::to_string(config.case_id));
}

std::vector<sim::ClusterTraffic> traffic_for(const SimConfig& config, const topology::TopologySpec& topo, int N,
                                             double b) {
  std::vector<sim::ClusterTraffic> traffic;
  const auto law = model::burst_law_for(config.on_law, config.n_p);
  for (const auto& c : topo.clusters) {
    traffic.push_back({c.id,
                       model::derive_source_params(c.lambda, N, config.n_p, b, config.on_law, config.off_law,
                                                   config.emission),
                       law});
  }
  return traffic;
}

std::uint64_t day_seed(std::uint64_t master, int day) {
  return derive_seed(master, static_cast<std::uint64_t>(day));
}

sim::RunConfig run_config_for(const SimConfig& config) {
  sim::RunConfig rc;
  rc.horizon_s = config.horizon_s;
  rc.warmup_s = config.warmup_s;
  return rc;
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  if (x == 0.0) return "0.00000000";
  char buf[512];
  int decimals = std::max(0, 8 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  // Rounding may carry into a new leading digit (9.9999999996 -> 10.00000000).
  int digits = 0;
  bool leading = true;
  for (const char* p = buf; *p; ++p) {
    if (*p < '0' || *p > '9') continue;
    if (leading && *p == '0') continue;
    leading = false;
    ++digits;
  }
  if (digits > 9 && decimals > 0) std::snprintf(buf, sizeof buf, "%.*f", decimals - 1, x);
  return buf;
}

std::string results_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.case_id) + "," + std::to_string(r.N) + "," + format_number(r.b) + "," + r.on_kind + "," +
           std::to_string(r.T) + "," + r.off_kind + "," + std::to_string(r.day) + "," + r.entity + "," +
           format_number(r.mpd_s) + "," + format_number(r.e2e_delay_s) + "," + format_number(r.throughput_pps) + "," +
           format_number(r.overflow_prob) + "," + (r.saturated ? "1" : "0") + "," + std::to_string(r.seed) + "," +
           r.status + "\n";
  }
  return out;
}

std::string summary_csv(const std::vector<SweepRow>& rows) {
  // Re-read the printed values so the summary agrees with results.csv.
  struct Group {
    std::string key;
    std::vector<std::vector<double>> metrics = std::vector<std::vector<double>>(4);
  };
  std::vector<Group> groups;
  std::map<std::string, std::size_t> index;
  const std::string csv = results_csv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != 15 || cells[14] != "ok") continue;
    const std::string key = cells[0] + "," + cells[1] + "," + cells[2] + "," + cells[3] + "," + cells[4] + "," +
                            cells[5] + "," + cells[7];
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) groups.push_back({key});
    for (int m = 0; m < 4; ++m) groups[it->second].metrics[m].push_back(std::stod(cells[8 + m]));
  }

  static const char* kMetricNames[] = {"mpd_s", "e2e_delay_s", "throughput_pps", "overflow_prob"};
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const auto& g : groups) {
    for (int m = 0; m < 4; ++m) {
      const auto s = sim::summarize(g.metrics[m]);
      out += g.key + "," + kMetricNames[m] + "," + std::to_string(g.metrics[m].size()) + "," + format_number(s.mean) +
             "," + format_number(s.min) + "," + format_number(s.max) + "," + format_number(s.cv) + "\n";
    }
  }
  return out;
}

SweepOutput run_sweep(const SimConfig& config, const SweepOptions& options) {
  validate(config);
  const auto points = sweep_points(config);
  const std::size_t days = static_cast<std::size_t>(config.days);
  const std::size_t tasks = points.size() * days;
  const std::size_t per_task = static_cast<std::size_t>(entity_count(config.case_id));

  fs::path out_dir;
  if (options.write_files) {
    if (config.output_dir.empty()) throw ConfigError("output_dir", "required when writing files");
    out_dir = config.output_dir;
    fs::create_directories(out_dir);
    if (config.trace) fs::create_directories(out_dir / "trace");
  }

  std::vector<std::vector<SweepRow>> results(tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&]() {
    for (std::size_t task = next++; task < tasks; task = next++) {
      const SweepPoint& pt = points[task / days];
      const int day = static_cast<int>(task % days);
      const std::uint64_t seed = day_seed(config.seed, day);

      SweepRow base;
      base.case_id = config.case_id;
      base.N = pt.N;
      base.b = pt.b;
      base.on_kind = config.on_law.label();
      base.T = truncation_column(config.on_law);
      base.off_kind = config.off_law.label();
      base.day = day;
      base.seed = seed;

      std::vector<SweepRow> rows;
      try {
        const auto topo = topology_for(config, pt.N);
        const auto traffic = traffic_for(config, topo, pt.N, pt.b);
        auto rc = run_config_for(config);
        std::ofstream trace;
        if (config.trace) {
          char name[128];
          std::snprintf(name, sizeof name, "trace_N%d_b%s_day%d.csv", pt.N, format_number(pt.b).c_str(), day);
          trace.open(out_dir / "trace" / name, std::ios::binary);
          rc.trace = &trace;
        }
        const auto result = sim::run_replication(topo, traffic, rc, seed, day);
        for (const auto& m : sim::measured_entities(result, topo)) {
          SweepRow row = base;
          row.entity = m.entity;
          row.mpd_s = m.mpd_s;
          row.e2e_delay_s = m.e2e_delay_s;
          row.throughput_pps = m.throughput_pps;
          row.overflow_prob = m.overflow_prob;
          row.saturated = result.saturated;
          rows.push_back(row);
        }
      } catch (const std::exception& e) {
        rows.clear();
        std::string why = e.what();
        for (char& ch : why)
          if (ch == ',' || ch == '\n') ch = ';';
        for (const auto& name : entity_names(config.case_id)) {
          SweepRow row = base;
          row.entity = name;
          row.status = "error: " + why;
          rows.push_back(row);
        }
      }
      results[task] = std::move(rows);
      const std::size_t finished = ++done;
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(finished, tasks);
      }
    }
  };

  const int threads = std::max(1, std::min<int>(options.parallel, static_cast<int>(tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepOutput output;
  for (auto& rows : results)
    for (auto& r : rows) output.rows.push_back(std::move(r));

  if (options.write_files) {
    write_file(out_dir / "results.csv", results_csv(output.rows));
    write_file(out_dir / "summary.csv", summary_csv(output.rows));
    output.files = {(out_dir / "results.csv").string(), (out_dir / "summary.csv").string()};

    PlotSpec plot_spec;
    plot_spec.directory = (out_dir / "plots").string();
    auto plots = emit_plotdata(output.rows, plot_spec);
    output.files.insert(output.files.end(), plots.files.begin(), plots.files.end());
    output.warnings = plots.warnings;

    nlohmann::json manifest;
    manifest["tool"] = "wsnburst";
    manifest["version"] = WSNBURST_VERSION;
    manifest["config"] = to_json(config);
    manifest["master_seed"] = config.seed;
    manifest["seed_derivation"] = "day_seed = splitmix64(master ^ splitmix64(day ^ 0x6a09e667f3bcc909))";
    std::vector<std::uint64_t> seeds;
    for (int d = 0; d < config.days; ++d) seeds.push_back(day_seed(config.seed, d));
    manifest["day_seeds"] = seeds;
    manifest["rows"] = output.rows.size();
    manifest["entities_per_replication"] = per_task;
    manifest["compiler"] = __VERSION__;
    write_file(out_dir / "run_manifest.json", manifest.dump(2) + "\n");
    output.files.push_back((out_dir / "run_manifest.json").string());
  }
  return output;
}

}  // namespace wsnburst::experiments
