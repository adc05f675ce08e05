#pragma once

// Event-driven simulation of ON/OFF sources feeding a tree of FIFO,
// infinite-buffer, exponential-service nodes.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "wsnburst/model.hpp"
#include "wsnburst/topology.hpp"

namespace wsnburst::sim {

// Traffic of every source in one cluster (all sources are identical).
struct ClusterTraffic {
  int cluster_id;
  model::SourceParams params;
  model::BulkSizeLaw burst_law;
};

struct RunConfig {
  double horizon_s = 90000.0;
  double warmup_s = 3600.0;
  double mean_packet_bytes = 100.0;
  // Per-hop trace rows, header included. Off when null.
  std::ostream* trace = nullptr;
};

// Counters of one queueing node. "Measured" packets are those created after
// the warm-up.
struct NodeStats {
  int node_id = 0;
  double service_rate = 0.0;
  double threshold = 0.0;
  std::uint64_t arrivals = 0;  // all packets, including warm-up
  std::uint64_t departures = 0;
  std::uint64_t in_system_at_end = 0;
  std::uint64_t measured_arrivals = 0;
  std::uint64_t measured_overflow_hits = 0;  // measured arrivals finding >= B in the node
  std::uint64_t measured_departures = 0;
  double measured_delay_sum = 0.0;  // sojourn times of measured departures
  double queue_area = 0.0;          // integral of the number in node over [warm-up, horizon]
  bool fifo_violated = false;

  double mean_delay() const;
  double mean_queue(double measured_span) const;
  double throughput(double measured_span) const;
};

struct ClusterStats {
  int cluster_id = 0;
  int attachment = 0;
  std::uint64_t emitted = 0;
  std::uint64_t measured_emitted = 0;
  std::uint64_t measured_arrivals_at_attachment = 0;
  std::uint64_t measured_delivered = 0;  // departed the sink
  double e2e_delay_sum = 0.0;

  double e2e_mean() const;
  double throughput(double measured_span) const;
};

struct OverflowEstimate {
  double probability = 0.0;
  bool defined = false;  // false when the node saw no measured arrival
  double std_error = 0.0;  // binomial; ignores correlation between arrivals
};

struct ReplicationResult {
  int day = 0;
  std::uint64_t seed = 0;
  double measured_span = 0.0;  // horizon - warm-up (s)
  bool saturated = false;
  double runtime_s = 0.0;
  std::uint64_t events = 0;
  std::vector<NodeStats> nodes;
  std::vector<ClusterStats> clusters;

  const NodeStats& node(int id) const;
  const ClusterStats& cluster(int id) const;
};

// Peak input rate of every queueing node (all sources ON, relays passing at
// most their service rate) reaches its service rate, or mean load does.
bool is_saturated(const topology::TopologySpec& topo, const std::vector<ClusterTraffic>& traffic);

ReplicationResult run_replication(const topology::TopologySpec& topo, const std::vector<ClusterTraffic>& traffic,
                                  const RunConfig& config, std::uint64_t seed, int day = 0);

OverflowEstimate estimate_overflow(const NodeStats& node);

inline constexpr const char* kTraceHeader =
    "packet_id,source_id,cluster_id,created_at,hop_node,arrive,depart,size_bytes";

}  // namespace wsnburst::sim
