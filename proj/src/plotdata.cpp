#include "wsnburst/plotdata.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <tuple>

#include "wsnburst/errors.hpp"
#include "wsnburst/metrics.hpp"

namespace wsnburst::experiments {

namespace fs = std::filesystem;

namespace {

double metric_of(const SweepRow& r, const std::string& metric) {
  if (metric == "mpd_s") return r.mpd_s;
  if (metric == "e2e_delay_s") return r.e2e_delay_s;
  if (metric == "throughput_pps") return r.throughput_pps;
  if (metric == "overflow_prob") return r.overflow_prob;
  throw DomainError("unknown plot metric \"" + metric + "\"");
}

bool log_scale(const std::string& metric) { return metric == "mpd_s" || metric == "e2e_delay_s"; }

}  // namespace

PlotOutput emit_plotdata(const std::vector<SweepRow>& rows, const PlotSpec& spec) {
  PlotOutput out;
  using SeriesKey = std::tuple<int, std::string, int, std::string, std::string>;  // N, on, T, off, entity
  std::map<SeriesKey, std::map<double, std::vector<const SweepRow*>>> series;
  for (const auto& r : rows) {
    if (r.status != "ok") continue;
    if (spec.entity && r.entity != *spec.entity) continue;
    series[{r.N, r.on_kind, r.T, r.off_kind, r.entity}][r.b].push_back(&r);
  }
  if (series.empty()) {
    out.warnings.push_back("no rows match the plot filter; no plot files written");
    return out;
  }

  const fs::path dir = spec.directory;
  fs::create_directories(dir);
  std::string script = "# gnuplot script; columns of every .dat: b mean min max (across days)\n";
  script += "set terminal pngcairo size 900,600\nset xlabel 'burstiness b'\nset key left top\n";

  for (const auto& metric : spec.metrics) {
    std::vector<std::pair<std::string, std::string>> plotted;  // file, title
    for (const auto& [key, by_b] : series) {
      const auto& [n, on, t, off, entity] = key;
      std::string name = metric + "_N" + std::to_string(n) + "_" + on + (on == "tpt" ? std::to_string(t) : "") +
                         "_" + off + "_" + entity + ".dat";
      std::ofstream dat(dir / name, std::ios::binary);
      if (!dat) throw std::runtime_error("cannot write " + (dir / name).string());
      for (const auto& [b, day_rows] : by_b) {
        std::vector<double> values;
        for (const auto* r : day_rows) values.push_back(metric_of(*r, metric));
        const auto s = sim::summarize(values);
        dat << format_number(b) << ' ' << format_number(s.mean) << ' ' << format_number(s.min) << ' '
            << format_number(s.max) << '\n';
      }
      out.files.push_back((dir / name).string());
      plotted.emplace_back(name, "N=" + std::to_string(n) + " " + on + " " + entity);
    }
    script += "\nset output '" + metric + ".png'\nset ylabel '" + metric + "'\n";
    script += log_scale(metric) ? "set logscale y\n" : "unset logscale y\n";
    script += "plot ";
    for (std::size_t i = 0; i < plotted.size(); ++i) {
      if (i) script += ", \\\n     ";
      script += "'" + plotted[i].first + "' using 1:2 with linespoints title '" + plotted[i].second + "'";
    }
    script += "\n";
  }

  std::ofstream gp(dir / "plot.gp", std::ios::binary);
  if (!gp) throw std::runtime_error("cannot write " + (dir / "plot.gp").string());
  gp << script;
  out.files.push_back((dir / "plot.gp").string());
  return out;
}

}  // namespace wsnburst::experiments
