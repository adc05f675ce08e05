#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <sstream>

#include "wsnburst/engine.hpp"
#include "wsnburst/metrics.hpp"
#include "wsnburst/source.hpp"

using namespace wsnburst;
using namespace wsnburst::sim;
using model::EmissionMode;
using model::PeriodLaw;
using Catch::Approx;

namespace {

std::vector<ClusterTraffic> uniform_traffic(const topology::TopologySpec& topo, double b, EmissionMode mode,
                                            const PeriodLaw& on = PeriodLaw::exponential(), double n_p = 50) {
  std::vector<ClusterTraffic> out;
  for (const auto& c : topo.clusters)
    out.push_back({c.id, model::derive_source_params(c.lambda, c.sources, n_p, b, on, PeriodLaw::exponential(), mode),
                   model::burst_law_for(on, n_p)});
  return out;
}

RunConfig short_run(double horizon, double warmup) {
  RunConfig c;
  c.horizon_s = horizon;
  c.warmup_s = warmup;
  return c;
}

}  // namespace

TEST_CASE("constant-rate burst spacing") {
  model::SourceParams p{};
  p.K = 50;
  p.lambda_p = 100;
  p.n_p = 3;
  p.b = 0.5;
  p.on_mean = 0.03;
  p.off_mean = 1.0;
  p.on_dist = dists::Exponential{0.03};
  p.off_dist = dists::Deterministic{1.0};
  const auto law = model::make_discretized_burst(dists::Deterministic{3});
  const auto e = source_emit(p, law, RngStream(1), 2.5);
  REQUIRE(e.size() == 6);
  CHECK(e[0].time == Approx(1.00));
  CHECK(e[1].time == Approx(1.01));
  CHECK(e[2].time == Approx(1.02));
  CHECK(e[2].burst == 0);
  CHECK(e[2].position == 2);
  CHECK(e[3].time == Approx(2.03));
  CHECK(e[3].burst == 1);
}

TEST_CASE("smooth source is periodic at rate K") {
  auto p = model::derive_source_params(20, 1, 5, 0.0, PeriodLaw::exponential(), PeriodLaw::exponential());
  const auto law = model::make_discretized_burst(dists::Deterministic{5});
  const auto e = source_emit(p, law, RngStream(3), 10.0);
  REQUIRE(e.size() == 200);
  for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i].time == Approx(i / 20.0).margin(1e-9));
}

TEST_CASE("long-run emission rate matches K") {
  for (auto mode : {EmissionMode::ConstantPeakRate, EmissionMode::PoissonAtPeakRate}) {
    const double horizon = 86400;
    const auto p = model::derive_source_params(50, 1, 50, 0.5, PeriodLaw::exponential(), PeriodLaw::exponential(), mode);
    const auto law = model::make_geometric_burst(50);
    // Renewal-reward: the count over t has variance ~ t/E[C] * Var(L - K C),
    // with C = ON + OFF. ON is L/lambda_p, or a Gamma(L, lambda_p) sum in
    // Poisson mode, which adds K^2 E[L] / lambda_p^2.
    const double cycles = horizon / (p.on_mean + p.off_mean);
    const double var_l = 50.0 * 49.0;  // geometric on {1,..} with mean 50
    double var_reward = (1.0 - p.b) * (1.0 - p.b) * var_l + p.K * p.K * p.off_mean * p.off_mean;
    if (mode == EmissionMode::PoissonAtPeakRate) var_reward += p.K * p.K * 50.0 / (p.lambda_p * p.lambda_p);
    const double se = std::sqrt(cycles * var_reward);
    const auto e = source_emit(p, law, RngStream(17), horizon);
    CHECK(std::abs(static_cast<double>(e.size()) - p.K * horizon) < 3.0 * se);
    for (std::size_t i = 1; i < e.size(); ++i) REQUIRE(e[i].time > e[i - 1].time);
  }
}

TEST_CASE("empty system") {
  const auto topo = topology::build_star(1, 50, 100, 1000);
  const auto r = run_replication(topo, {}, short_run(1000, 100), 1);
  for (const auto& n : r.nodes) {
    CHECK(n.arrivals == 0);
    CHECK(n.mean_delay() == 0.0);
    CHECK(n.queue_area == 0.0);
    const auto o = estimate_overflow(n);
    CHECK(o.probability == 0.0);
    CHECK_FALSE(o.defined);
  }
  for (const auto& m : measured_entities(r, topo)) {
    CHECK(m.mpd_s == 0.0);
    CHECK(m.throughput_pps == 0.0);
  }
}

TEST_CASE("M/M/1 mean delay and overflow") {
  const auto topo = topology::build_star(1, 50, 100, 10);
  const auto r = run_replication(topo, uniform_traffic(topo, 0.0, EmissionMode::PoissonAtPeakRate),
                                 short_run(40000, 1000), 5);
  const auto& sink = r.node(topo.sink());
  CHECK(sink.mean_delay() == Approx(0.02).epsilon(0.04));
  CHECK(sink.throughput(r.measured_span) == Approx(50).epsilon(0.02));
  // Little's law on the same run.
  CHECK(sink.mean_queue(r.measured_span) == Approx(50 * sink.mean_delay()).epsilon(0.02));
  const auto o = estimate_overflow(sink);
  CHECK(o.defined);
  CHECK(o.probability == Approx(std::pow(0.5, 10)).margin(0.5 * std::pow(0.5, 10)));
}

TEST_CASE("near-smooth bursty source") {
  const auto topo = topology::build_star(1, 50, 100, 1000);
  const auto r = run_replication(topo, uniform_traffic(topo, 0.05, EmissionMode::PoissonAtPeakRate),
                                 short_run(40000, 1000), 9);
  CHECK(r.node(topo.sink()).mean_delay() == Approx(0.02).epsilon(0.15));
  CHECK_FALSE(r.saturated);
}

TEST_CASE("FIFO and conservation in a tree") {
  const auto topo = topology::build_case3(2, 50, 0.5, 1000);
  const auto r = run_replication(topo, uniform_traffic(topo, 0.6, EmissionMode::ConstantPeakRate),
                                 short_run(5000, 500), 21);
  std::uint64_t relay_departures = 0;
  for (const auto& n : r.nodes) {
    CHECK_FALSE(n.fifo_violated);
    CHECK(n.arrivals == n.departures + n.in_system_at_end);
    if (topo.node(n.node_id).role == topology::NodeRole::Relay) relay_departures += n.departures;
  }
  std::uint64_t emitted = 0, direct = 0;
  for (const auto& c : r.clusters) {
    emitted += c.emitted;
    if (c.attachment == topo.sink()) direct += c.emitted;
  }
  CHECK(r.node(topo.sink()).arrivals == relay_departures + direct);
  std::uint64_t first_hop = 0;
  for (const auto& n : r.nodes)
    if (topo.node(n.node_id).role == topology::NodeRole::Relay) first_hop += n.arrivals;
  CHECK(first_hop + direct == emitted);
}

TEST_CASE("trace hops add up to the end-to-end delay") {
  const auto topo = topology::build_case2(1, 50, 0.5, 1000);
  std::ostringstream trace;
  auto config = short_run(300, 50);
  config.trace = &trace;
  const auto r = run_replication(topo, uniform_traffic(topo, 0.5, EmissionMode::ConstantPeakRate), config, 4);

  std::istringstream in(trace.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == kTraceHeader);
  struct Hops {
    double created = 0, hop_sum = 0, last_depart = 0;
    int count = 0;
    bool reached_sink = false;
  };
  std::map<std::uint64_t, Hops> packets;
  while (std::getline(in, line)) {
    std::uint64_t id;
    unsigned source;
    int cluster, node;
    double created, arrive, depart, size;
    REQUIRE(std::sscanf(line.c_str(), "%lu,%u,%d,%lf,%d,%lf,%lf,%lf", &id, &source, &cluster, &created, &node,
                        &arrive, &depart, &size) == 8);
    CHECK(depart >= arrive);
    CHECK(size > 0.0);
    auto& h = packets[id];
    h.created = created;
    h.hop_sum += depart - arrive;
    h.last_depart = std::max(h.last_depart, depart);
    h.reached_sink = h.reached_sink || node == topo.sink();
    ++h.count;
  }
  REQUIRE_FALSE(packets.empty());
  double e2e_sum = 0;
  std::uint64_t delivered = 0;
  for (const auto& [id, h] : packets) {
    if (!h.reached_sink) continue;
    CHECK(h.count == 2);
    CHECK(h.last_depart - h.created == Approx(h.hop_sum).margin(1e-9));
    if (h.created > config.warmup_s) {
      e2e_sum += h.last_depart - h.created;
      ++delivered;
    }
  }
  std::uint64_t engine_delivered = 0;
  double engine_sum = 0;
  for (const auto& c : r.clusters) {
    engine_delivered += c.measured_delivered;
    engine_sum += c.e2e_delay_sum;
  }
  CHECK(delivered == engine_delivered);
  CHECK(e2e_sum == Approx(engine_sum).epsilon(1e-9));
}

TEST_CASE("overflow thresholds at the extremes") {
  const auto low = topology::build_star(1, 50, 100, 1);
  const auto r1 = run_replication(low, uniform_traffic(low, 0.5, EmissionMode::ConstantPeakRate), short_run(2000, 100), 2);
  CHECK(estimate_overflow(r1.node(low.sink())).probability > 0.0);

  const auto high = topology::build_star(1, 50, 100, 1e9);
  const auto r2 = run_replication(high, uniform_traffic(high, 0.5, EmissionMode::ConstantPeakRate), short_run(2000, 100), 2);
  CHECK(estimate_overflow(r2.node(high.sink())).probability == 0.0);
}

TEST_CASE("saturation flag") {
  const auto topo = topology::build_star(1, 50, 100, 1000);
  CHECK_FALSE(is_saturated(topo, uniform_traffic(topo, 0.4, EmissionMode::ConstantPeakRate)));
  CHECK(is_saturated(topo, uniform_traffic(topo, 0.6, EmissionMode::ConstantPeakRate)));
}

TEST_CASE("replications are deterministic per seed") {
  const auto topo = topology::build_case2(2, 50, 0.5, 1000);
  const auto traffic = uniform_traffic(topo, 0.7, EmissionMode::ConstantPeakRate, PeriodLaw::pareto());
  const auto a = run_replication(topo, traffic, short_run(2000, 200), 77);
  const auto b = run_replication(topo, traffic, short_run(2000, 200), 77);
  const auto c = run_replication(topo, traffic, short_run(2000, 200), 78);
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].measured_delay_sum == b.nodes[i].measured_delay_sum);
    CHECK(a.nodes[i].arrivals == b.nodes[i].arrivals);
  }
  CHECK(a.node(topo.sink()).measured_delay_sum != c.node(topo.sink()).measured_delay_sum);
}

TEST_CASE("collect_metrics") {
  const auto topo = topology::build_case2(1, 50, 0.5, 1000);
  const auto traffic = uniform_traffic(topo, 0.5, EmissionMode::ConstantPeakRate);
  const auto one = run_replication(topo, traffic, short_run(1000, 100), 3);
  const auto report = collect_metrics({one}, topo);
  const auto direct = measured_entities(one, topo);
  REQUIRE(report.entities.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(report.entities[i].entity == direct[i].entity);
    CHECK(report.entities[i].mpd_s.mean == direct[i].mpd_s);
    CHECK(report.entities[i].e2e_delay_s.min == direct[i].e2e_delay_s);
    CHECK(report.entities[i].throughput_pps.max == direct[i].throughput_pps);
    CHECK(report.entities[i].mpd_s.cv == 0.0);
  }

  std::vector<ReplicationResult> same;
  for (int d = 0; d < 10; ++d) same.push_back(run_replication(topo, traffic, short_run(500, 50), 12, d));
  for (const auto& e : collect_metrics(same, topo).entities) {
    CHECK(e.mpd_s.cv == 0.0);
    CHECK(e.mpd_s.min == e.mpd_s.max);
  }

  const std::vector<double> values{1, 2, 3, 4};
  const auto s = summarize(values);
  CHECK(s.mean == 2.5);
  CHECK(s.min == 1);
  CHECK(s.max == 4);
  CHECK(s.cv == Approx(std::sqrt(5.0 / 3.0) / 2.5));
}
