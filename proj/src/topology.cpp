#include "wsnburst/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "wsnburst/errors.hpp"

namespace wsnburst::topology {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void check_rates(int sources, double lambda, double threshold) {
  require(sources >= 1, "cluster size N must be >= 1");
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be positive");
  require(threshold >= 1.0, "overflow threshold B must be >= 1");
}

void add_cluster(TopologySpec& spec, int cluster_id, int sources, double lambda, int attach) {
  const int node_id = static_cast<int>(spec.nodes.size());
  spec.nodes.push_back({node_id, NodeRole::SourceCluster, 0.0, 0.0});
  spec.edges.push_back({node_id, attach});
  spec.clusters.push_back({cluster_id, sources, node_id, lambda});
}

TopologySpec relayed(int case_id, int relayed_clusters, int sources, double lambda, double rho,
                     double threshold, std::optional<double> sink_rate, bool direct_cluster) {
  check_rates(sources, lambda, threshold);
  require(rho > 0.0 && rho < 1.0, "rho_target must lie in (0,1)");
  const int total_clusters = relayed_clusters + (direct_cluster ? 1 : 0);
  const double v_sink = sink_rate.value_or(total_clusters * lambda / rho);
  require(std::isfinite(v_sink) && v_sink > 0.0, "sink service rate must be positive");

  TopologySpec spec;
  spec.case_id = case_id;
  spec.depth = 3;
  spec.nodes.push_back({0, NodeRole::Sink, v_sink, threshold});
  for (int r = 0; r < relayed_clusters; ++r) {
    const int relay = static_cast<int>(spec.nodes.size());
    spec.nodes.push_back({relay, NodeRole::Relay, lambda / rho, threshold});
    spec.edges.push_back({relay, 0});
  }
  for (int r = 0; r < relayed_clusters; ++r) add_cluster(spec, r + 1, sources, lambda, r + 1);
  if (direct_cluster) add_cluster(spec, relayed_clusters + 1, sources, lambda, 0);
  return spec;
}

}  // namespace

std::string to_string(NodeRole role) {
  switch (role) {
    case NodeRole::SourceCluster:
      return "source-cluster";
    case NodeRole::Relay:
      return "relay";
    case NodeRole::Sink:
      return "sink";
  }
  return "?";
}

const Node& TopologySpec::node(int id) const {
  for (const auto& n : nodes)
    if (n.id == id) return n;
  throw DomainError("no node with id " + std::to_string(id));
}

std::optional<int> TopologySpec::parent(int id) const {
  for (const auto& e : edges)
    if (e.child == id) return e.parent;
  return std::nullopt;
}

int TopologySpec::sink() const {
  for (const auto& n : nodes)
    if (n.role == NodeRole::Sink) return n.id;
  throw DomainError("topology has no sink");
}

int TopologySpec::attachment(const Cluster& c) const {
  const auto p = parent(c.node);
  if (!p) throw DomainError("cluster " + std::to_string(c.id) + " is not attached");
  return *p;
}

std::vector<int> TopologySpec::path_to_sink(const Cluster& c) const {
  std::vector<int> path;
  std::optional<int> at = parent(c.node);
  while (at) {
    if (path.size() > nodes.size()) throw DomainError("cycle on path from cluster " + std::to_string(c.id));
    path.push_back(*at);
    at = parent(*at);
  }
  return path;
}

double TopologySpec::offered_load(int id) const {
  double load = 0.0;
  for (const auto& c : clusters) {
    const auto path = path_to_sink(c);
    if (std::find(path.begin(), path.end(), id) != path.end()) load += c.lambda;
  }
  return load;
}

std::vector<Diagnostic> validate_topology(const TopologySpec& spec) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string inv, std::string detail) { out.push_back({std::move(inv), std::move(detail)}); };

  std::map<int, const Node*> by_id;
  for (const auto& n : spec.nodes) {
    if (!by_id.emplace(n.id, &n).second) report("duplicate node id", "node " + std::to_string(n.id));
    if (n.role != NodeRole::SourceCluster && !(std::isfinite(n.service_rate) && n.service_rate > 0.0))
      report("nonpositive service rate", "node " + std::to_string(n.id));
    if (n.role != NodeRole::SourceCluster && !(n.threshold >= 1.0))
      report("threshold below 1", "node " + std::to_string(n.id));
  }

  std::vector<int> sinks;
  for (const auto& n : spec.nodes)
    if (n.role == NodeRole::Sink) sinks.push_back(n.id);
  if (sinks.empty()) report("no sink", "");
  if (sinks.size() > 1) {
    std::string ids;
    for (int s : sinks) ids += (ids.empty() ? "" : ", ") + std::to_string(s);
    report("multiple sinks", "nodes " + ids);
  }

  std::map<int, int> parent_of;
  for (const auto& e : spec.edges) {
    const std::string edge = std::to_string(e.child) + "->" + std::to_string(e.parent);
    if (!by_id.count(e.child) || !by_id.count(e.parent)) {
      report("edge references unknown node", "edge " + edge);
      continue;
    }
    if (by_id[e.child]->role == NodeRole::Sink) report("sink has a parent", "edge " + edge);
    if (by_id[e.parent]->role == NodeRole::SourceCluster) report("source cluster has children", "edge " + edge);
    if (!parent_of.emplace(e.child, e.parent).second) report("not a tree", "node " + std::to_string(e.child) + " has several parents");
  }

  // Every non-sink node must reach the sink without revisiting a node.
  int max_depth = 0;
  bool cyclic = false;
  for (const auto& n : spec.nodes) {
    if (n.role == NodeRole::Sink) continue;
    std::set<int> seen{n.id};
    int at = n.id;
    int levels = 1;
    for (;;) {
      auto it = parent_of.find(at);
      if (it == parent_of.end()) {
        if (by_id.count(at) && by_id[at]->role != NodeRole::Sink)
          report("node does not reach the sink", "node " + std::to_string(n.id));
        break;
      }
      at = it->second;
      ++levels;
      if (!seen.insert(at).second) {
        if (!cyclic) report("not a tree", "cycle through node " + std::to_string(at));
        cyclic = true;
        break;
      }
    }
    if (n.role == NodeRole::SourceCluster) max_depth = std::max(max_depth, levels);
  }

  std::set<int> cluster_ids;
  std::map<int, int> cluster_nodes;
  for (const auto& c : spec.clusters) {
    const std::string name = "cluster " + std::to_string(c.id);
    if (!cluster_ids.insert(c.id).second) report("duplicate cluster id", name);
    if (c.sources < 0) report("negative source count", name);
    if (!(c.lambda > 0.0) && c.sources > 0) report("nonpositive cluster rate", name);
    auto it = by_id.find(c.node);
    if (it == by_id.end() || it->second->role != NodeRole::SourceCluster) {
      report("cluster not bound to a source-cluster node", name);
      continue;
    }
    if (++cluster_nodes[c.node] > 1) report("source-cluster node shared by clusters", name);
    if (!parent_of.count(c.node)) report("cluster not attached", name);
  }
  for (const auto& n : spec.nodes)
    if (n.role == NodeRole::SourceCluster && !cluster_nodes.count(n.id))
      report("source-cluster node without a cluster", "node " + std::to_string(n.id));

  if (!cyclic && !spec.clusters.empty() && spec.depth != max_depth)
    report("depth mismatch", "declared " + std::to_string(spec.depth) + ", measured " + std::to_string(max_depth));
  return out;
}

TopologySpec build_star(int sources, double lambda_total, double v, double threshold) {
  check_rates(sources, lambda_total, threshold);
  require(std::isfinite(v) && v > 0.0, "service rate v must be positive");
  TopologySpec spec;
  spec.case_id = 1;
  spec.depth = 2;
  spec.nodes.push_back({0, NodeRole::Sink, v, threshold});
  add_cluster(spec, 1, sources, lambda_total, 0);
  return spec;
}

TopologySpec build_case2(int sources, double lambda_per_relay, double rho_target, double threshold,
                         std::optional<double> sink_service_rate) {
  return relayed(2, 2, sources, lambda_per_relay, rho_target, threshold, sink_service_rate, false);
}

TopologySpec build_case3(int sources, double lambda, double rho_target, double threshold,
                         std::optional<double> sink_service_rate) {
  return relayed(3, 2, sources, lambda, rho_target, threshold, sink_service_rate, true);
}

}  // namespace wsnburst::topology
