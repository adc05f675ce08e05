#pragma once

// Directed trees of source clusters, relays and one sink.

#include <optional>
#include <string>
#include <vector>

namespace wsnburst::topology {

enum class NodeRole { SourceCluster, Relay, Sink };

std::string to_string(NodeRole role);

struct Node {
  int id;
  NodeRole role;
  double service_rate;  // packets/s; unused for source clusters
  double threshold;     // overflow threshold B (packets)
};

struct Edge {
  int child;
  int parent;
};

// `node` is the cluster's SourceCluster node; its parent is the attachment.
struct Cluster {
  int id;
  int sources;
  int node;
  double lambda;  // total mean packet rate of the cluster (packets/s)
};

struct TopologySpec {
  int case_id = 0;
  int depth = 0;  // levels on the longest cluster-to-sink path, inclusive
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<Cluster> clusters;

  const Node& node(int id) const;
  std::optional<int> parent(int id) const;
  int sink() const;
  int attachment(const Cluster& c) const;
  // Queueing nodes a packet of cluster `c` visits, attachment first.
  std::vector<int> path_to_sink(const Cluster& c) const;
  // Mean packet rate entering queueing node `id`.
  double offered_load(int id) const;
};

struct Diagnostic {
  std::string invariant;
  std::string detail;
};

// Empty when every invariant holds. Never throws.
std::vector<Diagnostic> validate_topology(const TopologySpec& spec);

TopologySpec build_star(int sources, double lambda_total, double v, double threshold);

// Two clusters of `sources` each -> two relays -> sink. Relays run at
// lambda_per_relay / rho_target; the sink at 2 lambda_per_relay / rho_target
// unless `sink_service_rate` overrides it.
TopologySpec build_case2(int sources, double lambda_per_relay, double rho_target, double threshold,
                         std::optional<double> sink_service_rate = std::nullopt);

// Case 2 plus a third cluster attached directly to the sink; sink rate
// 3 lambda / rho_target by default.
TopologySpec build_case3(int sources, double lambda, double rho_target, double threshold,
                         std::optional<double> sink_service_rate = std::nullopt);

}  // namespace wsnburst::topology
