#include "egonet/graph.hpp"

#include <algorithm>
#include <fstream>

#include "egonet/errors.hpp"

namespace egonet {

std::optional<NodeId> SocialGraph::find(std::string_view user) const {
    const auto it = ids_.find(std::string(user));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

NodeId SocialGraph::require(std::string_view user) const {
    const auto id = find(user);
    if (!id) throw ValidationError("user not in graph: " + std::string(user));
    return *id;
}

const EdgeAggregate* SocialGraph::edge_between(NodeId from, NodeId to) const {
    const auto nbrs = neighbors(from);
    const auto it = std::lower_bound(
        nbrs.begin(), nbrs.end(), to,
        [](const NeighborRef& nb, NodeId id) { return nb.node < id; });
    if (it == nbrs.end() || it->node != to || it->out_edge < 0) return nullptr;
    return &edges_[static_cast<std::size_t>(it->out_edge)].agg;
}

namespace {

std::uint64_t pack_pair(NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

} // namespace

SocialGraph build_graph(std::span<const CallRecord> calls,
                        std::span<const SmsRecord> sms,
                        const std::optional<std::unordered_set<UserId>>& telco_users) {
    SocialGraph g;
    std::unordered_map<std::uint64_t, std::size_t> edge_index;

    const auto keep = [&](const UserId& origin, const UserId& dest) {
        if (origin == dest) return false; // no self-loops
        if (!telco_users) return true;
        return telco_users->count(origin) != 0 && telco_users->count(dest) != 0;
    };
    const auto intern = [&](const UserId& user) -> NodeId {
        const auto [it, inserted] =
            g.ids_.emplace(user, static_cast<NodeId>(g.names_.size()));
        if (inserted) g.names_.push_back(user);
        return it->second;
    };
    const auto edge_slot = [&](NodeId o, NodeId d) -> EdgeAggregate& {
        const auto [it, inserted] = edge_index.emplace(pack_pair(o, d), g.edges_.size());
        if (inserted) g.edges_.push_back(DirectedEdge{o, d, {}});
        return g.edges_[it->second].agg;
    };

    for (const CallRecord& r : calls) {
        if (!keep(r.origin, r.dest)) continue;
        EdgeAggregate& agg = edge_slot(intern(r.origin), intern(r.dest));
        agg.calls += 1;
        agg.time_s += r.duration_s;
    }
    for (const SmsRecord& r : sms) {
        if (!keep(r.origin, r.dest)) continue;
        edge_slot(intern(r.origin), intern(r.dest)).sms += 1;
    }

    // Undirected adjacency: one entry per unordered neighboring pair,
    // carrying both directed-edge indices.
    struct Half {
        NodeId owner;
        NodeId nbr;
        std::int32_t edge;
        bool owner_is_origin;
    };
    std::vector<Half> halves;
    halves.reserve(2 * g.edges_.size());
    for (std::size_t e = 0; e < g.edges_.size(); ++e) {
        const DirectedEdge& de = g.edges_[e];
        halves.push_back({de.origin, de.dest, static_cast<std::int32_t>(e), true});
        halves.push_back({de.dest, de.origin, static_cast<std::int32_t>(e), false});
    }
    std::sort(halves.begin(), halves.end(), [](const Half& x, const Half& y) {
        return x.owner != y.owner ? x.owner < y.owner : x.nbr < y.nbr;
    });

    const std::size_t n = g.names_.size();
    g.adj_offsets_.assign(n + 1, 0);
    g.adj_.reserve(halves.size());
    std::size_t i = 0;
    for (NodeId u = 0; u < n; ++u) {
        while (i < halves.size() && halves[i].owner == u) {
            NeighborRef ref{halves[i].nbr, -1, -1};
            while (i < halves.size() && halves[i].owner == u && halves[i].nbr == ref.node) {
                (halves[i].owner_is_origin ? ref.out_edge : ref.in_edge) = halves[i].edge;
                ++i;
            }
            g.adj_.push_back(ref);
        }
        g.adj_offsets_[u + 1] = g.adj_.size();
    }
    return g;
}

RingWalker::RingWalker(const SocialGraph& g)
    : g_(&g), mark_(g.node_count(), 0), dist_(g.node_count(), 0) {}

const std::vector<std::vector<NodeId>>& RingWalker::rings(NodeId v, unsigned max_n) {
    ++epoch_;
    rings_.clear();
    rings_.push_back({v});
    mark_[v] = epoch_;
    dist_[v] = 0;
    for (unsigned depth = 1; depth <= max_n; ++depth) {
        const std::vector<NodeId>& frontier = rings_.back();
        std::vector<NodeId> next;
        for (NodeId u : frontier) {
            for (const NeighborRef& nb : g_->neighbors(u)) {
                if (mark_[nb.node] == epoch_) continue;
                mark_[nb.node] = epoch_;
                dist_[nb.node] = depth;
                next.push_back(nb.node);
            }
        }
        if (next.empty()) break;
        std::sort(next.begin(), next.end());
        rings_.push_back(std::move(next));
    }
    return rings_;
}

std::vector<NodeId> ego_ring(const SocialGraph& g, NodeId v, unsigned n) {
    RingWalker walker(g);
    const auto& r = walker.rings(v, n);
    if (n >= r.size()) return {};
    return r[n];
}

std::vector<UserId> ego_ring(const SocialGraph& g, const UserId& v, unsigned n) {
    const auto ids = ego_ring(g, g.require(v), n);
    std::vector<UserId> out;
    out.reserve(ids.size());
    for (NodeId id : ids) out.push_back(g.name(id));
    return out;
}

std::vector<LevelEdge> level_edges(const SocialGraph& g, NodeId v, unsigned n) {
    if (n < 1) throw ValidationError("level_edges requires n >= 1");
    RingWalker walker(g);
    std::vector<LevelEdge> out;
    walker.for_each_level_edge(v, n, [&](unsigned level, const LevelEdge& e) {
        if (level == n) out.push_back(e);
    });
    return out;
}

std::vector<LevelEdge> level_edges(const SocialGraph& g, const UserId& v, unsigned n) {
    return level_edges(g, g.require(v), n);
}

void write_graph_csv(const SocialGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw IoError("cannot write file: " + path.string());
    std::vector<std::size_t> order(g.edges().size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const DirectedEdge& a = g.edges()[x];
        const DirectedEdge& b = g.edges()[y];
        const std::string& ao = g.name(a.origin);
        const std::string& bo = g.name(b.origin);
        if (ao != bo) return ao < bo;
        return g.name(a.dest) < g.name(b.dest);
    });
    out << "origin,dest,calls,time_s,sms\n";
    for (std::size_t i : order) {
        const DirectedEdge& e = g.edges()[i];
        out << g.name(e.origin) << ',' << g.name(e.dest) << ',' << e.agg.calls
            << ',' << e.agg.time_s << ',' << e.agg.sms << '\n';
    }
}

} // namespace egonet
