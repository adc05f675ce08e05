#include "wsnburst/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wsnburst/errors.hpp"

namespace wsnburst::experiments {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "case",     "N",         "b",    "on_kind", "off_kind",   "n_p",       "lambda_total",
    "rho",      "v",         "B",    "horizon_s", "warmup_s", "days",      "seed",
    "output_dir", "emission_mode", "sink_service_rate", "trace", "topology"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  return j.get<int>();
}

}  // namespace

std::vector<double> BGrid::values() const {
  std::vector<double> out;
  if (!(step > 0.0)) return out;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) out.push_back(std::round((start + i * step) * 1e12) / 1e12);
  return out;
}

double SimConfig::utilization() const {
  if (rho) return *rho;
  if (v) return lambda_total / *v;
  return 0.5;
}

double SimConfig::service_rate() const { return v ? *v : lambda_total / utilization(); }

model::PeriodLaw period_law_from_json(const json& j, const std::string& field) {
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object()) {
    reject_unknown(j, {"kind", "alpha", "theta", "T"}, field);
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError(field + ".kind", "expected a string");
    kind = j["kind"].get<std::string>();
  } else {
    throw ConfigError(field, "expected a string or an object");
  }

  model::PeriodLaw law;
  if (kind == "exp") {
    law = model::PeriodLaw::exponential();
  } else if (kind == "pareto") {
    law = model::PeriodLaw::pareto();
  } else if (kind == "tpt") {
    if (!j.is_object() || !j.contains("T")) throw ConfigError(field + ".T", "tpt needs a truncation level T");
    law = model::PeriodLaw::tpt(integer(j["T"], field + ".T"));
    if (law.truncation < 1) throw ConfigError(field + ".T", "must be >= 1");
  } else {
    throw ConfigError(field, "unknown kind \"" + kind + "\" (exp, pareto, tpt)");
  }
  if (j.is_object()) {
    if (j.contains("alpha")) {
      if (law.family == model::PeriodLaw::Family::Exponential) throw ConfigError(field + ".alpha", "not used by exp");
      law.alpha = number(j["alpha"], field + ".alpha");
      if (!(law.alpha > 1.0)) throw ConfigError(field + ".alpha", "must exceed 1");
    }
    if (j.contains("theta")) {
      if (law.family != model::PeriodLaw::Family::Tpt) throw ConfigError(field + ".theta", "only used by tpt");
      law.theta = number(j["theta"], field + ".theta");
      if (!(law.theta > 0.0 && law.theta < 1.0)) throw ConfigError(field + ".theta", "must lie in (0,1)");
    }
    if (j.contains("T") && law.family != model::PeriodLaw::Family::Tpt)
      throw ConfigError(field + ".T", "only used by tpt");
  }
  return law;
}

json to_json(const model::PeriodLaw& law) {
  switch (law.family) {
    case model::PeriodLaw::Family::Exponential:
      return {{"kind", "exp"}};
    case model::PeriodLaw::Family::Pareto:
      return {{"kind", "pareto"}, {"alpha", law.alpha}};
    case model::PeriodLaw::Family::Tpt:
      return {{"kind", "tpt"}, {"alpha", law.alpha}, {"theta", law.theta}, {"T", law.truncation}};
  }
  return {};
}

void validate(const SimConfig& c) {
  if (c.case_id < 1 || c.case_id > 3) throw ConfigError("case", "must be 1, 2 or 3");
  if (c.node_counts.empty()) throw ConfigError("N", "needs at least one node count");
  for (int n : c.node_counts)
    if (n < 1) throw ConfigError("N", "node counts must be >= 1");
  if (!(c.b_grid.step > 0.0)) throw ConfigError("b.step", "must be positive");
  if (!(c.b_grid.start >= 0.0)) throw ConfigError("b.start", "must be >= 0");
  if (!(c.b_grid.stop < 1.0)) throw ConfigError("b.stop", "must be < 1");
  if (!(c.b_grid.start <= c.b_grid.stop)) throw ConfigError("b.start", "must not exceed b.stop");
  if (!(c.n_p >= 1.0)) throw ConfigError("n_p", "must be >= 1");
  if (!(c.lambda_total > 0.0) || !std::isfinite(c.lambda_total)) throw ConfigError("lambda_total", "must be positive");
  if (c.rho && c.v) throw ConfigError("rho", "give either rho or v, not both");
  if (c.rho && !(*c.rho > 0.0 && *c.rho < 1.0)) throw ConfigError("rho", "must lie in (0,1)");
  if (c.v && !(*c.v > 0.0)) throw ConfigError("v", "must be positive");
  if (c.v && !(c.lambda_total / *c.v < 1.0)) throw ConfigError("v", "must exceed lambda_total");
  if (!(c.threshold >= 1.0)) throw ConfigError("B", "must be >= 1");
  if (!(c.horizon_s > 0.0)) throw ConfigError("horizon_s", "must be positive");
  if (!(c.warmup_s > 0.0 && c.warmup_s < c.horizon_s)) throw ConfigError("warmup_s", "must lie in (0, horizon_s)");
  if (c.days < 1) throw ConfigError("days", "must be >= 1");
  if (c.sink_service_rate && !(*c.sink_service_rate > 0.0))
    throw ConfigError("sink_service_rate", "must be positive");
  if (c.sink_service_rate && c.case_id == 1)
    throw ConfigError("sink_service_rate", "only applies to cases 2 and 3; use v for case 1");
}

SimConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(j, kTopLevelKeys, "");
  SimConfig c;

  json topo = json::object();
  if (j.contains("topology")) {
    topo = j["topology"];
    if (!topo.is_object()) throw ConfigError("topology", "expected an object");
    reject_unknown(topo, {"case", "N", "overrides"}, "topology");
    for (const char* key : {"case", "N"})
      if (topo.contains(key) && j.contains(key))
        throw ConfigError(key, "given both at top level and inside topology");
  }
  auto pick = [&](const char* key) -> const json* {
    if (j.contains(key)) return &j[key];
    if (topo.contains(key)) return &topo[key];
    return nullptr;
  };

  const json* case_j = pick("case");
  if (!case_j) throw ConfigError("case", "required");
  c.case_id = integer(*case_j, "case");

  const json* n_j = pick("N");
  if (!n_j) throw ConfigError("N", "required");
  if (n_j->is_number_integer()) {
    c.node_counts = {n_j->get<int>()};
  } else if (n_j->is_array()) {
    for (const auto& n : *n_j) c.node_counts.push_back(integer(n, "N"));
  } else {
    throw ConfigError("N", "expected an integer or a list of integers");
  }

  if (!j.contains("b")) throw ConfigError("b", "required");
  const json& b = j["b"];
  if (b.is_number()) {
    c.b_grid = {b.get<double>(), b.get<double>(), 1.0};
  } else if (b.is_object()) {
    reject_unknown(b, {"start", "stop", "step"}, "b");
    for (const char* key : {"start", "stop"})
      if (!b.contains(key)) throw ConfigError(std::string("b.") + key, "required");
    c.b_grid.start = number(b["start"], "b.start");
    c.b_grid.stop = number(b["stop"], "b.stop");
    if (b.contains("step")) c.b_grid.step = number(b["step"], "b.step");
  } else {
    throw ConfigError("b", "expected {start, stop, step} or a number");
  }

  if (!j.contains("on_kind")) throw ConfigError("on_kind", "required");
  c.on_law = period_law_from_json(j["on_kind"], "on_kind");
  if (j.contains("off_kind")) {
    c.off_law = period_law_from_json(j["off_kind"], "off_kind");
    if (c.off_law.family == model::PeriodLaw::Family::Tpt) throw ConfigError("off_kind", "must be exp or pareto");
  }

  if (j.contains("emission_mode")) {
    if (!j["emission_mode"].is_string()) throw ConfigError("emission_mode", "expected a string");
    try {
      c.emission = model::emission_mode_from_string(j["emission_mode"].get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError("emission_mode", e.what());
    }
  }
  if (j.contains("n_p")) c.n_p = number(j["n_p"], "n_p");
  if (j.contains("lambda_total")) c.lambda_total = number(j["lambda_total"], "lambda_total");
  if (j.contains("rho")) c.rho = number(j["rho"], "rho");
  if (j.contains("v")) c.v = number(j["v"], "v");
  if (j.contains("B")) c.threshold = number(j["B"], "B");
  if (j.contains("horizon_s")) c.horizon_s = number(j["horizon_s"], "horizon_s");
  if (j.contains("warmup_s")) c.warmup_s = number(j["warmup_s"], "warmup_s");
  if (j.contains("days")) c.days = integer(j["days"], "days");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      throw ConfigError("seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("trace")) {
    if (!j["trace"].is_boolean()) throw ConfigError("trace", "expected a boolean");
    c.trace = j["trace"].get<bool>();
  }
  if (j.contains("sink_service_rate")) c.sink_service_rate = number(j["sink_service_rate"], "sink_service_rate");
  if (topo.contains("overrides")) {
    const json& o = topo["overrides"];
    if (!o.is_object()) throw ConfigError("topology.overrides", "expected an object");
    reject_unknown(o, {"sink_service_rate"}, "topology.overrides");
    if (o.contains("sink_service_rate")) {
      if (c.sink_service_rate) throw ConfigError("sink_service_rate", "given twice");
      c.sink_service_rate = number(o["sink_service_rate"], "topology.overrides.sink_service_rate");
    }
  }

  validate(c);
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const SimConfig& c) {
  json j = {{"case", c.case_id},
            {"N", c.node_counts},
            {"b", {{"start", c.b_grid.start}, {"stop", c.b_grid.stop}, {"step", c.b_grid.step}}},
            {"on_kind", to_json(c.on_law)},
            {"off_kind", to_json(c.off_law)},
            {"emission_mode", model::to_string(c.emission)},
            {"n_p", c.n_p},
            {"lambda_total", c.lambda_total},
            {"B", c.threshold},
            {"horizon_s", c.horizon_s},
            {"warmup_s", c.warmup_s},
            {"days", c.days},
            {"seed", c.seed},
            {"trace", c.trace}};
  if (c.v)
    j["v"] = *c.v;
  else
    j["rho"] = c.utilization();
  if (c.sink_service_rate) j["sink_service_rate"] = *c.sink_service_rate;
  if (!c.output_dir.empty()) j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace wsnburst::experiments
