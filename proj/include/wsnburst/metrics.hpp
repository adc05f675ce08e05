#pragma once

#include <span>
#include <string>
#include <vector>

#include "wsnburst/engine.hpp"
#include "wsnburst/topology.hpp"

namespace wsnburst::sim {

// One measured entity of one replication: a cluster (seen at its attachment
// node and end to end) or the sink.
struct EntityMetrics {
  std::string entity;
  double mpd_s = 0.0;  // mean sojourn at the entity's node
  double e2e_delay_s = 0.0;
  double throughput_pps = 0.0;
  double overflow_prob = 0.0;
  bool overflow_defined = false;
  double mean_queue = 0.0;
};

// Star topologies report the sink only; trees report every cluster, then the sink.
std::vector<EntityMetrics> measured_entities(const ReplicationResult& result, const topology::TopologySpec& topo);

struct MetricSummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double cv = 0.0;  // sample standard deviation / mean; 0 for one value or zero mean
};

MetricSummary summarize(std::span<const double> values);

struct EntityAggregate {
  std::string entity;
  MetricSummary mpd_s, e2e_delay_s, throughput_pps, overflow_prob, mean_queue;
};

struct AggregateReport {
  std::vector<std::vector<EntityMetrics>> per_day;  // input order preserved
  std::vector<EntityAggregate> entities;
};

AggregateReport collect_metrics(const std::vector<ReplicationResult>& results, const topology::TopologySpec& topo);

}  // namespace wsnburst::sim
