#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"

#include "wsnburst/analytic.hpp"
#include "wsnburst/config.hpp"
#include "wsnburst/errors.hpp"
#include "wsnburst/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

using namespace wsnburst;

void write_csv(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-Burst WSN traffic model: closed-form results and case-study simulator", "wsnburst"};
  app.require_subcommand(1);

  auto* analytic = app.add_subcommand("analytic", "Closed-form results");
  analytic->require_subcommand(1);

  int blowup_n = 1;
  double blowup_rho = 0.5;
  std::string rho_sweep;
  std::string blowup_csv_path;
  auto* blowup = analytic->add_subcommand("blowup", "Blow-up point locations b_1..b_N");
  blowup->add_option("--n", blowup_n, "Number of sources N")->required();
  blowup->add_option("--rho", blowup_rho, "Sink utilization");
  blowup->add_option("--rho-sweep", rho_sweep, "Utilization sweep a:b:step (replaces --rho)");
  blowup->add_option("--csv", blowup_csv_path, "Also write the table as CSV");

  double limits_v = 0.0;
  double limits_rho = 0.0;
  std::string limits_law;
  std::string limits_csv_path;
  auto* limits = analytic->add_subcommand("limits", "Smooth (b=0) and bulk (b=1) mean packet delay limits");
  limits->add_option("--v", limits_v, "Service rate (packets/s)")->required();
  limits->add_option("--rho", limits_rho, "Utilization")->required();
  limits->add_option("--law", limits_law, "Burst size law geom:<n_p> | det:<L>")->required();
  limits->add_option("--csv", limits_csv_path, "Also write the report as CSV");

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> days;
  int parallel = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* simulate = app.add_subcommand("simulate", "Run a configured sweep and write CSV/plot data");
  simulate->add_option("--config", config_path, "JSON config file")->required();
  simulate->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  simulate->add_option("--seed", seed, "Master seed (overrides seed)");
  simulate->add_option("--days", days, "Replications per sweep point (overrides days)");
  simulate->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file and print the resolved settings");
  validate->add_option("--config", validate_path, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*blowup) {
      std::vector<double> rhos = rho_sweep.empty() ? std::vector<double>{blowup_rho} : experiments::parse_range(rho_sweep);
      const auto rows = experiments::blowup_table(blowup_n, rhos);
      std::cout << experiments::format_blowup_table(rows);
      if (!blowup_csv_path.empty()) write_csv(blowup_csv_path, experiments::blowup_csv(rows));
      return kOk;
    }
    if (*limits) {
      const auto report = experiments::limits_report(limits_v, limits_rho, limits_law);
      std::cout << experiments::format_limits(report);
      if (!limits_csv_path.empty()) write_csv(limits_csv_path, experiments::limits_csv(report));
      return kOk;
    }
    if (*validate) {
      const auto config = experiments::load_config(validate_path);
      const auto points = experiments::sweep_points(config);
      std::cout << "config ok: case " << config.case_id << ", " << points.size() << " sweep points x " << config.days
                << " days x " << experiments::entity_count(config.case_id) << " entities = "
                << points.size() * config.days * experiments::entity_count(config.case_id) << " rows\n";
      std::cout << experiments::to_json(config).dump(2) << "\n";
      return kOk;
    }
    if (*simulate) {
      auto config = experiments::load_config(config_path);
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (seed) config.seed = *seed;
      if (days) config.days = *days;
      experiments::validate(config);
      if (config.output_dir.empty()) throw ConfigError("output_dir", "give --out or output_dir in the config");

      experiments::SweepOptions options;
      options.parallel = parallel;
      options.progress = [](std::size_t done, std::size_t total) {
        std::fprintf(stderr, "\rreplications %zu/%zu", done, total);
        if (done == total) std::fprintf(stderr, "\n");
      };
      const auto output = experiments::run_sweep(config, options);
      for (const auto& w : output.warnings) std::cerr << "warning: " << w << "\n";
      std::size_t failed = 0;
      for (const auto& r : output.rows)
        if (r.status != "ok") ++failed;
      std::cout << "wrote " << output.rows.size() << " rows to " << config.output_dir << "/results.csv\n";
      if (failed) {
        std::cerr << failed << " rows failed; see the status column\n";
        return kRuntimeError;
      }
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
