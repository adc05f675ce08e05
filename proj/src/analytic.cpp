#include "wsnburst/analytic.hpp"

#include <cmath>
#include <cstdio>

#include "wsnburst/errors.hpp"
#include "wsnburst/sweep.hpp"

namespace wsnburst::experiments {

namespace {

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw DomainError(what + ": cannot parse \"" + text + "\" as a number");
  return value;
}

}  // namespace

std::vector<BlowupRow> blowup_table(int node_count, std::span<const double> rhos) {
  std::vector<BlowupRow> rows;
  for (double rho : rhos) rows.push_back({rho, model::blowup_points(node_count, rho)});
  return rows;
}

std::string format_blowup_table(const std::vector<BlowupRow>& rows) {
  if (rows.empty()) return "";
  std::string out = "rho     ";
  for (std::size_t i = 1; i <= rows.front().points.size(); ++i) {
    std::string h = "b_" + std::to_string(i);
    out += "  " + h + std::string(h.size() < 8 ? 8 - h.size() : 0, ' ');
  }
  out += "\n";
  for (const auto& r : rows) {
    out += fixed6(r.rho);
    for (double b : r.points) out += "  " + fixed6(b);
    out += "\n";
  }
  return out;
}

std::string blowup_csv(const std::vector<BlowupRow>& rows) {
  std::string out = "rho";
  if (!rows.empty())
    for (std::size_t i = 1; i <= rows.front().points.size(); ++i) out += ",b_" + std::to_string(i);
  out += "\n";
  for (const auto& r : rows) {
    out += format_number(r.rho);
    for (double b : r.points) out += "," + format_number(b);
    out += "\n";
  }
  return out;
}

std::vector<double> parse_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos) throw DomainError("range must look like a:b:step, got \"" + text + "\"");
  const double a = parse_double(text.substr(0, first), "range start");
  const double b = parse_double(text.substr(first + 1, second - first - 1), "range stop");
  const double step = parse_double(text.substr(second + 1), "range step");
  if (!(step > 0.0)) throw DomainError("range step must be positive");
  if (b < a) throw DomainError("range stop must not be below start");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) out.push_back(std::round((a + i * step) * 1e12) / 1e12);
  return out;
}

model::BulkSizeLaw parse_law(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("law must be geom:<n_p> or det:<L>, got \"" + text + "\"");
  const std::string kind = text.substr(0, colon);
  const double value = parse_double(text.substr(colon + 1), "law parameter");
  if (kind == "geom") return model::make_geometric_burst(value);
  if (kind == "det") {
    if (!(value >= 1.0)) throw DomainError("deterministic burst size must be >= 1");
    return model::make_discretized_burst(dists::Deterministic{value});
  }
  throw DomainError("unknown law kind \"" + kind + "\" (geom, det)");
}

LimitsReport limits_report(double v, double rho, const std::string& law) {
  const auto bulk_law = parse_law(law);
  LimitsReport r{v, rho, law, model::mpd_smooth_limit(v, rho), model::bulk_factor(bulk_law), 0.0};
  r.bulk_s = r.bulk.value * r.smooth_s;
  return r;
}

std::string format_limits(const LimitsReport& r) {
  std::string out;
  out += "v                 " + fixed6(r.v) + "\n";
  out += "rho               " + fixed6(r.rho) + "\n";
  out += "law               " + r.law + "\n";
  out += "mpd_smooth_limit  " + fixed6(r.smooth_s) + " s\n";
  out += "bulk_factor_D     " + fixed6(r.bulk.value) + "\n";
  out += "mpd_bulk_limit    " + fixed6(r.bulk_s) + " s\n";
  if (r.bulk.unstable) out += "warning: burst-size second moment is infinite; D does not converge\n";
  return out;
}

std::string limits_csv(const LimitsReport& r) {
  return "v,rho,law,mpd_smooth_limit_s,bulk_factor,bulk_factor_se,mpd_bulk_limit_s,unstable\n" + format_number(r.v) +
         "," + format_number(r.rho) + "," + r.law + "," + format_number(r.smooth_s) + "," +
         format_number(r.bulk.value) + "," + format_number(r.bulk.std_error) + "," + format_number(r.bulk_s) + "," +
         (r.bulk.unstable ? "1" : "0") + "\n";
}

}  // namespace wsnburst::experiments
