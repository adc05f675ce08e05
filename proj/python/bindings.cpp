// Python bindings. Structured values (distribution specs, configs, results)
// cross the boundary as JSON text; the package wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "wsnburst/analytic.hpp"
#include "wsnburst/config.hpp"
#include "wsnburst/dists.hpp"
#include "wsnburst/engine.hpp"
#include "wsnburst/errors.hpp"
#include "wsnburst/metrics.hpp"
#include "wsnburst/model.hpp"
#include "wsnburst/sweep.hpp"
#include "wsnburst/topology.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace wsnburst;

namespace {

json source_json(const model::SourceParams& p) {
  json j{{"K", p.K},         {"lambda_p", p.lambda_p}, {"n_p", p.n_p},
         {"b", p.b},         {"on_mean", p.on_mean},   {"off_mean", p.off_mean},
         {"on_dist", dists::to_json(p.on_dist)},       {"emission_mode", model::to_string(p.emission_mode)}};
  j["off_dist"] = p.off_dist ? dists::to_json(*p.off_dist) : json(nullptr);
  return j;
}

json topology_json(const topology::TopologySpec& t) {
  json nodes = json::array(), edges = json::array(), clusters = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({{"id", n.id}, {"role", topology::to_string(n.role)}, {"service_rate", n.service_rate},
                     {"threshold", n.threshold}});
  for (const auto& e : t.edges) edges.push_back({{"child", e.child}, {"parent", e.parent}});
  for (const auto& c : t.clusters)
    clusters.push_back({{"id", c.id}, {"sources", c.sources}, {"node", c.node}, {"lambda", c.lambda},
                        {"attachment", t.attachment(c)}});
  return {{"case", t.case_id}, {"depth", t.depth}, {"nodes", nodes}, {"edges", edges}, {"clusters", clusters}};
}

json row_json(const experiments::SweepRow& r) {
  return {{"case", r.case_id},       {"N", r.N},
          {"b", r.b},                {"on_kind", r.on_kind},
          {"T", r.T},                {"off_kind", r.off_kind},
          {"day", r.day},            {"entity", r.entity},
          {"mpd_s", r.mpd_s},        {"e2e_delay_s", r.e2e_delay_s},
          {"throughput_pps", r.throughput_pps}, {"overflow_prob", r.overflow_prob},
          {"saturated", r.saturated}, {"seed", r.seed},
          {"status", r.status}};
}

model::PeriodLaw law_from_text(const std::string& text, const std::string& field) {
  return experiments::period_law_from_json(json::parse(text), field);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "N-Burst WSN traffic model: closed-form results and simulator";
  m.attr("__version__") = WSNBURST_VERSION;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const json::exception& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  // dists
  m.def("reliability", [](const std::string& spec, double x) { return dists::reliability(dists::from_json(json::parse(spec)), x); });
  m.def("mean_of", [](const std::string& spec) { return dists::mean_of(dists::from_json(json::parse(spec))); });
  m.def(
      "sample",
      [](const std::string& spec, std::size_t count, std::uint64_t seed) {
        const auto d = dists::from_json(json::parse(spec));
        dists::validate(d);
        RngStream s(seed);
        std::vector<double> out(count);
        for (auto& x : out) x = dists::sample(d, s);
        return out;
      },
      py::arg("spec"), py::arg("count"), py::arg("seed"));
  m.def("tpt_calibrate", [](double theta, double alpha, double mean, int truncation) {
    return dists::to_json(dists::tpt_calibrate(theta, alpha, mean, truncation)).dump();
  });

  // model
  m.def(
      "derive_source_params",
      [](double lambda_total, int N, double n_p, double b, const std::string& on, const std::string& off,
         const std::string& mode) {
        return source_json(model::derive_source_params(lambda_total, N, n_p, b, law_from_text(on, "on_kind"),
                                                       law_from_text(off, "off_kind"),
                                                       model::emission_mode_from_string(mode)))
            .dump();
      },
      py::arg("lambda_total"), py::arg("N"), py::arg("n_p"), py::arg("b"), py::arg("on"), py::arg("off"),
      py::arg("mode"));
  m.def("burstiness", &model::burstiness, py::arg("K"), py::arg("lambda_p"));
  m.def("blowup_points", &model::blowup_points, py::arg("N"), py::arg("rho"));
  m.def("mpd_smooth_limit", &model::mpd_smooth_limit, py::arg("v"), py::arg("rho"));
  m.def(
      "bulk_factor",
      [](const std::string& law, std::uint64_t samples, std::uint64_t seed) {
        const auto f = model::bulk_factor(experiments::parse_law(law), samples, seed);
        return py::make_tuple(f.value, f.std_error, f.unstable);
      },
      py::arg("law"), py::arg("samples") = 1'000'000, py::arg("seed") = 0x5eed);
  m.def("mpd_bulk_limit", [](double v, double rho, const std::string& law) {
    return model::mpd_bulk_limit(v, rho, experiments::parse_law(law));
  });

  // topology
  m.def("build_topology", [](const std::string& config_text, int N) {
    return topology_json(experiments::topology_for(experiments::parse_config(json::parse(config_text)), N)).dump();
  });
  m.def("validate_topology", [](const std::string& config_text, int N) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& d :
         topology::validate_topology(experiments::topology_for(experiments::parse_config(json::parse(config_text)), N)))
      out.emplace_back(d.invariant, d.detail);
    return out;
  });

  // simulation
  m.def(
      "run_replication",
      [](const std::string& config_text, int N, double b, int day) {
        const auto config = experiments::parse_config(json::parse(config_text));
        const auto topo = experiments::topology_for(config, N);
        const auto traffic = experiments::traffic_for(config, topo, N, b);
        const auto rc = experiments::run_config_for(config);
        sim::ReplicationResult r;
        {
          py::gil_scoped_release release;
          r = sim::run_replication(topo, traffic, rc, experiments::day_seed(config.seed, day), day);
        }
        json entities = json::array();
        for (const auto& e : sim::measured_entities(r, topo))
          entities.push_back({{"entity", e.entity},
                              {"mpd_s", e.mpd_s},
                              {"e2e_delay_s", e.e2e_delay_s},
                              {"throughput_pps", e.throughput_pps},
                              {"overflow_prob", e.overflow_prob},
                              {"overflow_defined", e.overflow_defined},
                              {"mean_queue", e.mean_queue}});
        return json{{"day", r.day},           {"seed", r.seed},     {"measured_span", r.measured_span},
                    {"saturated", r.saturated}, {"events", r.events}, {"entities", entities}}
            .dump();
      },
      py::arg("config"), py::arg("N"), py::arg("b"), py::arg("day") = 0);

  // experiments
  m.def("load_config", [](const std::string& path) { return experiments::to_json(experiments::load_config(path)).dump(); });
  m.def("normalize_config", [](const std::string& config_text) {
    return experiments::to_json(experiments::parse_config(json::parse(config_text))).dump();
  });
  m.def(
      "run_sweep",
      [](const std::string& config_text, int parallel, bool write_files) {
        const auto config = experiments::parse_config(json::parse(config_text));
        experiments::SweepOptions options;
        options.parallel = parallel;
        options.write_files = write_files;
        experiments::SweepOutput out;
        {
          py::gil_scoped_release release;
          out = experiments::run_sweep(config, options);
        }
        json rows = json::array();
        for (const auto& r : out.rows) rows.push_back(row_json(r));
        return json{{"rows", rows}, {"files", out.files}, {"warnings", out.warnings}}.dump();
      },
      py::arg("config"), py::arg("parallel") = 1, py::arg("write_files") = false);
  m.def("results_csv_header", [] { return std::string(experiments::kResultsHeader); });
}
