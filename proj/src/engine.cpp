#include "wsnburst/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <deque>
#include <functional>
#include <memory>
#include <queue>

#include "wsnburst/errors.hpp"
#include "wsnburst/source.hpp"

namespace wsnburst::sim {

namespace {

enum : std::uint64_t { kSourceStream = 1, kServiceStream = 2, kSizeStream = 3 };

struct Packet {
  std::uint64_t id;
  std::uint32_t source;
  std::int32_t cluster;
  double created;
  double arrived;  // at the current hop
  double size;
};

enum class EventKind : std::uint8_t { Emission, Departure };

struct Event {
  double time;
  std::uint32_t entity;  // node id, or first_source_entity + source index
  EventKind kind;
  std::uint64_t packet;
};

// Earliest first; ties by (entity, packet).
struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.entity != b.entity) return a.entity > b.entity;
    return a.packet > b.packet;
  }
};

struct NodeRuntime {
  NodeStats stats;
  int parent = -1;  // dense index
  std::deque<Packet> queue;  // front is in service
  RngStream service;
  double last_change = 0.0;

  explicit NodeRuntime(RngStream s) : service(s) {}
};

struct SourceRuntime {
  int cluster_index;
  int attach;  // dense node index
  std::uint32_t trace_id;
  SourceProcess process;
  RngStream sizes;
  std::uint64_t pending_packet = 0;
};

std::uint64_t source_tag(int cluster_id, int k) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cluster_id)) << 32) | static_cast<std::uint32_t>(k);
}

class Replication {
 public:
  Replication(const topology::TopologySpec& topo, const std::vector<ClusterTraffic>& traffic,
              const RunConfig& config, std::uint64_t seed)
      : topo_(topo), config_(config), seed_(seed) {
    if (!(config.warmup_s >= 0.0 && config.warmup_s < config.horizon_s))
      throw DomainError("warm-up must lie in [0, horizon)");
    if (auto diags = topology::validate_topology(topo); !diags.empty())
      throw DomainError("invalid topology: " + diags.front().invariant + " (" + diags.front().detail + ")");

    int max_id = 0;
    for (const auto& n : topo.nodes) max_id = std::max(max_id, n.id);
    dense_.assign(max_id + 1, -1);
    for (const auto& n : topo.nodes) {
      if (n.role == topology::NodeRole::SourceCluster) continue;
      dense_[n.id] = static_cast<int>(nodes_.size());
      nodes_.emplace_back(RngStream(derive_seed(seed, kServiceStream, static_cast<std::uint64_t>(n.id))));
      auto& s = nodes_.back().stats;
      s.node_id = n.id;
      s.service_rate = n.service_rate;
      s.threshold = n.threshold;
    }
    for (auto& rt : nodes_) {
      const auto p = topo.parent(rt.stats.node_id);
      rt.parent = p ? dense_.at(*p) : -1;
    }
    first_source_entity_ = static_cast<std::uint32_t>(max_id + 1);

    for (const auto& c : topo.clusters) {
      ClusterStats cs;
      cs.cluster_id = c.id;
      cs.attachment = topo.attachment(c);
      clusters_.push_back(cs);
      attach_of_cluster_.push_back(dense_.at(cs.attachment));
    }

    std::vector<const ClusterTraffic*> ordered;
    for (const auto& t : traffic) ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(),
              [](const ClusterTraffic* a, const ClusterTraffic* b) { return a->cluster_id < b->cluster_id; });
    for (const ClusterTraffic* t : ordered) {
      const auto it = std::find_if(topo.clusters.begin(), topo.clusters.end(),
                                   [&](const topology::Cluster& c) { return c.id == t->cluster_id; });
      if (it == topo.clusters.end())
        throw DomainError("traffic for unknown cluster " + std::to_string(t->cluster_id));
      const int ci = static_cast<int>(it - topo.clusters.begin());
      for (int k = 0; k < it->sources; ++k) {
        const auto tag = source_tag(t->cluster_id, k);
        sources_.push_back(std::make_unique<SourceRuntime>(SourceRuntime{
            ci, attach_of_cluster_[ci], static_cast<std::uint32_t>(sources_.size()),
            SourceProcess(t->params, t->burst_law, RngStream(derive_seed(seed, kSourceStream, tag)), config.horizon_s),
            RngStream(derive_seed(seed, kSizeStream, tag))}));
      }
    }
  }

  ReplicationResult run() {
    const auto wall = std::chrono::steady_clock::now();
    if (config_.trace) *config_.trace << kTraceHeader << '\n';
    for (std::size_t s = 0; s < sources_.size(); ++s) schedule_emission(s);

    std::uint64_t events = 0;
    while (!pending_.empty()) {
      const Event ev = pending_.top();
      if (ev.time > config_.horizon_s) break;
      pending_.pop();
      ++events;
      if (ev.kind == EventKind::Emission)
        emit(ev);
      else
        depart(ev);
    }

    ReplicationResult result;
    result.seed = seed_;
    result.measured_span = config_.horizon_s - config_.warmup_s;
    result.events = events;
    for (auto& rt : nodes_) {
      advance(rt, config_.horizon_s);
      rt.stats.in_system_at_end = rt.queue.size();
      result.nodes.push_back(rt.stats);
    }
    result.clusters = clusters_;
    result.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall).count();
    return result;
  }

 private:
  void schedule_emission(std::size_t s) {
    auto& src = *sources_[s];
    if (auto e = src.process.next()) {
      src.pending_packet = next_packet_++;
      pending_.push({e->time, first_source_entity_ + static_cast<std::uint32_t>(s), EventKind::Emission,
                     src.pending_packet});
    }
  }

  void advance(NodeRuntime& rt, double t) {
    const double from = std::max(rt.last_change, config_.warmup_s);
    if (t > from) rt.stats.queue_area += static_cast<double>(rt.queue.size()) * (t - from);
    rt.last_change = t;
  }

  void emit(const Event& ev) {
    const std::size_t s = ev.entity - first_source_entity_;
    auto& src = *sources_[s];
    auto& cs = clusters_[src.cluster_index];
    ++cs.emitted;
    if (ev.time > config_.warmup_s) ++cs.measured_emitted;
    const double size = config_.trace ? -std::log(src.sizes.uniform()) * config_.mean_packet_bytes : 0.0;
    arrive(src.attach, Packet{ev.packet, src.trace_id, src.cluster_index, ev.time, ev.time, size}, ev.time);
    schedule_emission(s);
  }

  void arrive(int n, Packet p, double t) {
    auto& rt = nodes_[n];
    advance(rt, t);
    ++rt.stats.arrivals;
    if (p.created > config_.warmup_s) {
      ++rt.stats.measured_arrivals;
      if (static_cast<double>(rt.queue.size()) >= rt.stats.threshold) ++rt.stats.measured_overflow_hits;
      if (attach_of_cluster_[p.cluster] == n) ++clusters_[p.cluster].measured_arrivals_at_attachment;
    }
    p.arrived = t;
    rt.queue.push_back(p);
    if (rt.queue.size() == 1) start_service(n, t);
  }

  void start_service(int n, double t) {
    auto& rt = nodes_[n];
    const double service = -std::log(rt.service.uniform()) / rt.stats.service_rate;
    pending_.push({t + service, static_cast<std::uint32_t>(rt.stats.node_id), EventKind::Departure,
                   rt.queue.front().id});
  }

  void depart(const Event& ev) {
    const int n = dense_[ev.entity];
    auto& rt = nodes_[n];
    advance(rt, ev.time);
    const Packet p = rt.queue.front();
    rt.queue.pop_front();
    if (p.id != ev.packet) rt.stats.fifo_violated = true;
    ++rt.stats.departures;
    const bool measured = p.created > config_.warmup_s;
    if (measured) {
      ++rt.stats.measured_departures;
      rt.stats.measured_delay_sum += ev.time - p.arrived;
    }
    if (config_.trace) write_trace(p, rt.stats.node_id, ev.time);
    if (!rt.queue.empty()) start_service(n, ev.time);

    if (rt.parent >= 0) {
      arrive(rt.parent, p, ev.time);
    } else if (measured) {
      auto& cs = clusters_[p.cluster];
      ++cs.measured_delivered;
      cs.e2e_delay_sum += ev.time - p.created;
    }
  }

  void write_trace(const Packet& p, int node_id, double depart) {
    char line[256];
    std::snprintf(line, sizeof line, "%" PRIu64 ",%u,%d,%.17g,%d,%.17g,%.17g,%.17g\n", p.id, p.source,
                  clusters_[p.cluster].cluster_id, p.created, node_id, p.arrived, depart, p.size);
    *config_.trace << line;
  }

  const topology::TopologySpec& topo_;
  const RunConfig& config_;
  std::uint64_t seed_;
  std::vector<int> dense_;
  std::vector<NodeRuntime> nodes_;
  std::vector<ClusterStats> clusters_;
  std::vector<int> attach_of_cluster_;
  std::vector<std::unique_ptr<SourceRuntime>> sources_;
  std::uint32_t first_source_entity_ = 0;
  std::uint64_t next_packet_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> pending_;
};

}  // namespace

double NodeStats::mean_delay() const {
  return measured_departures ? measured_delay_sum / static_cast<double>(measured_departures) : 0.0;
}

double NodeStats::mean_queue(double measured_span) const {
  return measured_span > 0.0 ? queue_area / measured_span : 0.0;
}

double NodeStats::throughput(double measured_span) const {
  return measured_span > 0.0 ? static_cast<double>(measured_arrivals) / measured_span : 0.0;
}

double ClusterStats::e2e_mean() const {
  return measured_delivered ? e2e_delay_sum / static_cast<double>(measured_delivered) : 0.0;
}

double ClusterStats::throughput(double measured_span) const {
  return measured_span > 0.0 ? static_cast<double>(measured_arrivals_at_attachment) / measured_span : 0.0;
}

const NodeStats& ReplicationResult::node(int id) const {
  for (const auto& n : nodes)
    if (n.node_id == id) return n;
  throw DomainError("no node " + std::to_string(id) + " in result");
}

const ClusterStats& ReplicationResult::cluster(int id) const {
  for (const auto& c : clusters)
    if (c.cluster_id == id) return c;
  throw DomainError("no cluster " + std::to_string(id) + " in result");
}

bool is_saturated(const topology::TopologySpec& topo, const std::vector<ClusterTraffic>& traffic) {
  auto peak_of_cluster = [&](int cluster_id) {
    for (const auto& t : traffic)
      if (t.cluster_id == cluster_id) return t.params.lambda_p;
    return 0.0;
  };
  std::function<double(int)> peak_in = [&](int id) {
    double peak = 0.0;
    for (const auto& c : topo.clusters)
      if (topo.attachment(c) == id) peak += c.sources * peak_of_cluster(c.id);
    for (const auto& e : topo.edges) {
      if (e.parent != id) continue;
      const auto& child = topo.node(e.child);
      if (child.role != topology::NodeRole::SourceCluster)
        peak += std::min(peak_in(child.id), child.service_rate);
    }
    return peak;
  };
  for (const auto& n : topo.nodes) {
    if (n.role == topology::NodeRole::SourceCluster) continue;
    double mean_load = 0.0;
    for (const auto& c : topo.clusters) {
      const auto path = topo.path_to_sink(c);
      if (std::find(path.begin(), path.end(), n.id) != path.end() && peak_of_cluster(c.id) > 0.0)
        mean_load += c.lambda;
    }
    if (mean_load >= n.service_rate || peak_in(n.id) >= n.service_rate) return true;
  }
  return false;
}

ReplicationResult run_replication(const topology::TopologySpec& topo, const std::vector<ClusterTraffic>& traffic,
                                  const RunConfig& config, std::uint64_t seed, int day) {
  Replication replication(topo, traffic, config, seed);
  ReplicationResult result = replication.run();
  result.day = day;
  result.saturated = is_saturated(topo, traffic);
  return result;
}

OverflowEstimate estimate_overflow(const NodeStats& node) {
  if (node.measured_arrivals == 0) return {};
  const double n = static_cast<double>(node.measured_arrivals);
  const double p = static_cast<double>(node.measured_overflow_hits) / n;
  return {p, true, std::sqrt(p * (1.0 - p) / n)};
}

}  // namespace wsnburst::sim
