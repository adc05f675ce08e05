#include "wsnburst/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "wsnburst/errors.hpp"

namespace wsnburst::sim {

std::vector<EntityMetrics> measured_entities(const ReplicationResult& result, const topology::TopologySpec& topo) {
  std::vector<EntityMetrics> out;
  const double span = result.measured_span;
  const int sink_id = topo.sink();
  const bool star = topo.clusters.size() == 1 && topo.attachment(topo.clusters.front()) == sink_id;

  if (!star) {
    for (const auto& c : topo.clusters) {
      const auto& cs = result.cluster(c.id);
      const auto& at = result.node(cs.attachment);
      const auto of = estimate_overflow(at);
      out.push_back({"cluster" + std::to_string(c.id), at.mean_delay(), cs.e2e_mean(), cs.throughput(span),
                     of.probability, of.defined, at.mean_queue(span)});
    }
  }

  const auto& sink = result.node(sink_id);
  double e2e_sum = 0.0;
  std::uint64_t delivered = 0;
  for (const auto& cs : result.clusters) {
    e2e_sum += cs.e2e_delay_sum;
    delivered += cs.measured_delivered;
  }
  const auto of = estimate_overflow(sink);
  out.push_back({"sink", sink.mean_delay(), delivered ? e2e_sum / static_cast<double>(delivered) : 0.0,
                 sink.throughput(span), of.probability, of.defined, sink.mean_queue(span)});
  return out;
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  // Identical values: report them exactly rather than a rounded average.
  if (s.min == s.max) {
    s.mean = s.min;
    return s;
  }
  s.mean = sum / n;
  if (s.mean != 0.0) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.cv = std::sqrt(ss / (n - 1.0)) / std::abs(s.mean);
  }
  return s;
}

AggregateReport collect_metrics(const std::vector<ReplicationResult>& results, const topology::TopologySpec& topo) {
  if (results.empty()) throw DomainError("collect_metrics needs at least one replication");
  AggregateReport report;
  for (const auto& r : results) report.per_day.push_back(measured_entities(r, topo));

  const std::size_t entities = report.per_day.front().size();
  for (std::size_t e = 0; e < entities; ++e) {
    auto column = [&](double EntityMetrics::*field) {
      std::vector<double> values;
      for (const auto& day : report.per_day) values.push_back(day[e].*field);
      return summarize(values);
    };
    report.entities.push_back({report.per_day.front()[e].entity, column(&EntityMetrics::mpd_s),
                               column(&EntityMetrics::e2e_delay_s), column(&EntityMetrics::throughput_pps),
                               column(&EntityMetrics::overflow_prob), column(&EntityMetrics::mean_queue)});
  }
  return report;
}

}  // namespace wsnburst::sim
