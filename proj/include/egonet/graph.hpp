#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "egonet/records.hpp"

namespace egonet {

using NodeId = std::uint32_t;

// Per directed (origin, dest) pair: total calls, total call seconds, SMS count.
struct EdgeAggregate {
    std::uint64_t calls = 0;
    std::uint64_t time_s = 0;
    std::uint64_t sms = 0;

    bool operator==(const EdgeAggregate&) const = default;
};

struct DirectedEdge {
    NodeId origin = 0;
    NodeId dest = 0;
    EdgeAggregate agg;
};

// Undirected adjacency entry for node u: the neighbor plus indices of the
// directed edges (u -> nbr) and (nbr -> u), -1 when a direction is absent.
struct NeighborRef {
    NodeId node = 0;
    std::int32_t out_edge = -1;
    std::int32_t in_edge = -1;
};

// Immutable after build_graph; all traversal is read-only and thread-safe.
class SocialGraph {
public:
    std::size_t node_count() const { return names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::string& name(NodeId id) const { return names_[id]; }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<NodeId> find(std::string_view user) const;
    // Throws ValidationError when the user is not a node.
    NodeId require(std::string_view user) const;

    const std::vector<DirectedEdge>& edges() const { return edges_; }
    // Aggregate of the directed edge (from -> to), or nullptr if absent.
    const EdgeAggregate* edge_between(NodeId from, NodeId to) const;

    std::span<const NeighborRef> neighbors(NodeId u) const {
        return {adj_.data() + adj_offsets_[u], adj_.data() + adj_offsets_[u + 1]};
    }

    friend SocialGraph build_graph(std::span<const CallRecord> calls,
                                   std::span<const SmsRecord> sms,
                                   const std::optional<std::unordered_set<UserId>>& telco_users);

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> ids_;
    std::vector<DirectedEdge> edges_;
    std::vector<std::uint64_t> adj_offsets_;
    std::vector<NeighborRef> adj_;
};

// One directed edge per communicating (origin, dest) pair with summed
// aggregates. When telco_users is given, records touching users outside the
// set are dropped. Nodes are exactly the endpoints of retained records.
SocialGraph build_graph(std::span<const CallRecord> calls,
                        std::span<const SmsRecord> sms,
                        const std::optional<std::unordered_set<UserId>>& telco_users = std::nullopt);

// A directed edge on the border between ring n-1 and ring n around some
// focal node. `inner_is_origin` marks which endpoint is the inner one.
struct LevelEdge {
    NodeId origin = 0;
    NodeId dest = 0;
    bool inner_is_origin = false;
    const EdgeAggregate* agg = nullptr;

    NodeId inner() const { return inner_is_origin ? origin : dest; }
    NodeId outer() const { return inner_is_origin ? dest : origin; }
};

// Reusable BFS scratch. One walker per thread; rings(v, k) returns the nodes
// at undirected distance 0..k from v, each ring sorted by node id.
class RingWalker {
public:
    explicit RingWalker(const SocialGraph& g);

    const std::vector<std::vector<NodeId>>& rings(NodeId v, unsigned max_n);

    // Visits every directed edge between ring n-1 and ring n for
    // n = 1..max_n, in deterministic order. Callback: (level, LevelEdge).
    template <typename Fn>
    void for_each_level_edge(NodeId v, unsigned max_n, Fn&& fn) {
        const auto& r = rings(v, max_n);
        for (unsigned n = 1; n < r.size(); ++n) {
            if (r[n].empty()) break;
            visit_level(r[n - 1], n, fn);
        }
    }

private:
    template <typename Fn>
    void visit_level(const std::vector<NodeId>& inner_ring, unsigned n, Fn&& fn) {
        for (NodeId a : inner_ring) {
            for (const NeighborRef& nb : g_->neighbors(a)) {
                if (!in_ring(nb.node, n)) continue;
                if (nb.out_edge >= 0) {
                    fn(n, LevelEdge{a, nb.node, true,
                                    &g_->edges()[static_cast<std::size_t>(nb.out_edge)].agg});
                }
                if (nb.in_edge >= 0) {
                    fn(n, LevelEdge{nb.node, a, false,
                                    &g_->edges()[static_cast<std::size_t>(nb.in_edge)].agg});
                }
            }
        }
    }

    bool in_ring(NodeId u, unsigned n) const {
        return mark_[u] == epoch_ && dist_[u] == n;
    }

    const SocialGraph* g_;
    std::vector<std::uint32_t> mark_;
    std::vector<std::uint32_t> dist_;
    std::uint32_t epoch_ = 0;
    std::vector<std::vector<NodeId>> rings_;
};

// Nodes at undirected shortest-path distance exactly n from v (ring 0 = {v}),
// sorted. Edge direction is ignored for distance.
std::vector<NodeId> ego_ring(const SocialGraph& g, NodeId v, unsigned n);
std::vector<UserId> ego_ring(const SocialGraph& g, const UserId& v, unsigned n);

// All directed edges with one endpoint in ring n-1 and the other in ring n
// around v (n >= 1). For n = 1 this is exactly the edges incident to v.
std::vector<LevelEdge> level_edges(const SocialGraph& g, NodeId v, unsigned n);
std::vector<LevelEdge> level_edges(const SocialGraph& g, const UserId& v, unsigned n);

// Debug dump: CSV `origin,dest,calls,time_s,sms` sorted by names.
void write_graph_csv(const SocialGraph& g, const std::filesystem::path& path);

} // namespace egonet
