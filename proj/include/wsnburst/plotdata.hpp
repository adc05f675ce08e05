#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsnburst/sweep.hpp"

namespace wsnburst::experiments {

struct PlotSpec {
  std::string directory;
  std::vector<std::string> metrics = {"mpd_s", "e2e_delay_s", "throughput_pps", "overflow_prob"};
  std::optional<std::string> entity;  // all entities when unset
};

struct PlotOutput {
  std::vector<std::string> files;  // .dat files, then plot.gp
  std::vector<std::string> warnings;
};

// One .dat per (metric, N, on_kind, entity) series with lines "b mean min max"
// (across days, ok rows only), plus a gnuplot script. Delay metrics are
// plotted on a logarithmic y axis.
PlotOutput emit_plotdata(const std::vector<SweepRow>& rows, const PlotSpec& spec);

}  // namespace wsnburst::experiments
