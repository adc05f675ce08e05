#pragma once

// Tables behind `wsnburst analytic blowup|limits`.

#include <span>
#include <string>
#include <vector>

#include "wsnburst/model.hpp"

namespace wsnburst::experiments {

struct BlowupRow {
  double rho;
  std::vector<double> points;  // b_1 .. b_N
};

std::vector<BlowupRow> blowup_table(int node_count, std::span<const double> rhos);
std::string format_blowup_table(const std::vector<BlowupRow>& rows);
std::string blowup_csv(const std::vector<BlowupRow>& rows);

// "a:b:step", inclusive of b within 1e-9.
std::vector<double> parse_range(const std::string& text);

// "geom:<n_p>" or "det:<L>"
model::BulkSizeLaw parse_law(const std::string& text);

struct LimitsReport {
  double v;
  double rho;
  std::string law;
  double smooth_s;
  model::BulkFactor bulk;
  double bulk_s;
};

LimitsReport limits_report(double v, double rho, const std::string& law);
std::string format_limits(const LimitsReport& report);
std::string limits_csv(const LimitsReport& report);

}  // namespace wsnburst::experiments
