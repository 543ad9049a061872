#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "egonet/errors.hpp"
#include "egonet/graph.hpp"
#include "egonet/truth.hpp"
#include "test_util.hpp"

using namespace egonet;
using testutil::call;
using testutil::sms;

namespace {

// Independent BFS oracle straight from the record lists.
std::map<std::string, std::set<std::string>> oracle_adjacency(
    const std::vector<CallRecord>& calls, const std::vector<SmsRecord>& smses) {
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& c : calls) {
        if (c.origin == c.dest) continue;
        adj[c.origin].insert(c.dest);
        adj[c.dest].insert(c.origin);
    }
    for (const auto& s : smses) {
        if (s.origin == s.dest) continue;
        adj[s.origin].insert(s.dest);
        adj[s.dest].insert(s.origin);
    }
    return adj;
}

std::set<std::string> oracle_ring(const std::map<std::string, std::set<std::string>>& adj,
                                  const std::string& v, unsigned n) {
    std::map<std::string, unsigned> dist;
    dist[v] = 0;
    std::queue<std::string> q;
    q.push(v);
    while (!q.empty()) {
        const std::string u = q.front();
        q.pop();
        if (dist[u] >= n) continue;
        const auto it = adj.find(u);
        if (it == adj.end()) continue;
        for (const auto& w : it->second) {
            if (dist.count(w) == 0) {
                dist[w] = dist[u] + 1;
                q.push(w);
            }
        }
    }
    std::set<std::string> ring;
    for (const auto& [node, d] : dist) {
        if (d == n) ring.insert(node);
    }
    return ring;
}

} // namespace

TEST_CASE("build_graph aggregates per directed pair") {
    const std::vector<CallRecord> calls = {call("a", "b", 60), call("a", "b", 30)};
    const std::vector<SmsRecord> smses = {sms("b", "a")};
    const SocialGraph g = build_graph(calls, smses);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 2);
    const NodeId a = g.require("a");
    const NodeId b = g.require("b");
    const EdgeAggregate* ab = g.edge_between(a, b);
    REQUIRE(ab != nullptr);
    CHECK(*ab == EdgeAggregate{2, 90, 0});
    const EdgeAggregate* ba = g.edge_between(b, a);
    REQUIRE(ba != nullptr);
    CHECK(*ba == EdgeAggregate{0, 0, 1});
}

TEST_CASE("build_graph empty inputs") {
    const SocialGraph g = build_graph({}, {});
    CHECK(g.node_count() == 0);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("build_graph keeps sms-only pairs") {
    const SocialGraph g = build_graph({}, std::vector<SmsRecord>{sms("c", "d")});
    CHECK(g.node_count() == 2);
    const EdgeAggregate* cd = g.edge_between(g.require("c"), g.require("d"));
    REQUIRE(cd != nullptr);
    CHECK(*cd == EdgeAggregate{0, 0, 1});
}

TEST_CASE("build_graph telco filter drops outside records") {
    const std::vector<CallRecord> calls = {call("a", "b"), call("a", "x"), call("x", "y")};
    const SocialGraph g =
        build_graph(calls, {}, std::unordered_set<UserId>{"a", "b"});
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(!g.find("x"));
}

TEST_CASE("conservation of calls, time, and sms totals") {
    const auto recs = testutil::random_records(30, 120, 5);
    const SocialGraph g = build_graph(recs.calls, recs.sms);
    std::uint64_t want_calls = recs.calls.size();
    std::uint64_t want_time = 0;
    for (const auto& c : recs.calls) want_time += c.duration_s;
    const std::uint64_t want_sms = recs.sms.size();

    std::uint64_t got_calls = 0, got_time = 0, got_sms = 0;
    for (const DirectedEdge& e : g.edges()) {
        got_calls += e.agg.calls;
        got_time += e.agg.time_s;
        got_sms += e.agg.sms;
        CHECK(e.agg.calls + e.agg.sms >= 1);
        if (e.agg.time_s > 0) CHECK(e.agg.calls >= 1);
    }
    CHECK(got_calls == want_calls);
    CHECK(got_time == want_time);
    CHECK(got_sms == want_sms);
}

TEST_CASE("label_users median split") {
    const SocialGraph g = build_graph(
        std::vector<CallRecord>{call("a", "b"), call("c", "d")}, {});
    std::vector<BankRecord> bank = {
        {"a", 0, 10}, {"b", 0, 20}, {"c", 0, 30}, {"d", 0, 40}};
    const GroundTruth truth = label_users(bank, g);
    CHECK(truth.labels.at("a") == IncomeLabel::Low);
    CHECK(truth.labels.at("b") == IncomeLabel::Low);
    CHECK(truth.labels.at("c") == IncomeLabel::High);
    CHECK(truth.labels.at("d") == IncomeLabel::High);
}

TEST_CASE("label_users odd count gives Low the extra user") {
    const SocialGraph g = build_graph(
        std::vector<CallRecord>{call("a", "b"), call("c", "a")}, {});
    std::vector<BankRecord> bank = {{"a", 0, 10}, {"b", 0, 20}, {"c", 0, 30}};
    const GroundTruth truth = label_users(bank, g);
    CHECK(truth.labels.at("a") == IncomeLabel::Low);
    CHECK(truth.labels.at("b") == IncomeLabel::Low);
    CHECK(truth.labels.at("c") == IncomeLabel::High);
}

TEST_CASE("label_users breaks income ties by user id") {
    const SocialGraph g = build_graph(
        std::vector<CallRecord>{call("a", "b"), call("c", "d")}, {});
    std::vector<BankRecord> bank = {
        {"d", 0, 20}, {"c", 0, 20}, {"b", 0, 20}, {"a", 0, 20}};
    const GroundTruth truth = label_users(bank, g);
    CHECK(truth.labels.at("a") == IncomeLabel::Low);
    CHECK(truth.labels.at("b") == IncomeLabel::Low);
    CHECK(truth.labels.at("c") == IncomeLabel::High);
    CHECK(truth.labels.at("d") == IncomeLabel::High);
}

TEST_CASE("label_users averages months and restricts to graph nodes") {
    const SocialGraph g = build_graph(
        std::vector<CallRecord>{call("a", "b")}, {});
    // "z" is not in the graph; a's mean is 25, b's is 10.
    std::vector<BankRecord> bank = {
        {"a", 0, 20}, {"a", 1, 30}, {"b", 0, 10}, {"z", 0, 99999}};
    const GroundTruth truth = label_users(bank, g);
    CHECK(truth.size() == 2);
    CHECK(truth.labels.at("b") == IncomeLabel::Low);
    CHECK(truth.labels.at("a") == IncomeLabel::High);

    std::vector<BankRecord> unmatched = {{"z", 0, 1}};
    CHECK_THROWS_AS(label_users(unmatched, g), ValidationError);
}

TEST_CASE("label_users low/high sizes differ by at most one") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto recs = testutil::random_records(40, 80, seed);
        const SocialGraph g = build_graph(recs.calls, recs.sms);
        std::vector<BankRecord> bank;
        Rng rng(seed + 100);
        for (const auto& name : g.names()) {
            bank.push_back({name, 0, rng.next_double() * 1000.0});
        }
        const GroundTruth truth = label_users(bank, g);
        std::size_t lows = 0, highs = 0;
        for (const auto& [user, label] : truth.labels) {
            (label == IncomeLabel::Low ? lows : highs) += 1;
        }
        CHECK(lows >= highs);
        CHECK(lows - highs <= 1);
    }
}

namespace {

GroundTruth balanced_truth(std::size_t n) {
    GroundTruth truth;
    for (std::size_t i = 0; i < n; ++i) {
        truth.labels.emplace(testutil::user_name(i),
                             i % 2 == 0 ? IncomeLabel::Low : IncomeLabel::High);
    }
    return truth;
}

} // namespace

TEST_CASE("partition_truth stratified 75/25 split") {
    const GroundTruth truth = balanced_truth(100);
    const TruthPartition part = partition_truth(truth, 42);
    CHECK(part.feature_set.size() == 75);
    CHECK(part.train_set.size() == 25);

    std::size_t low_in_g = 0, high_in_g = 0;
    for (const auto& u : part.feature_set) {
        (truth.labels.at(u) == IncomeLabel::Low ? low_in_g : high_in_g) += 1;
    }
    CHECK(low_in_g + high_in_g == 75);
    CHECK(low_in_g >= 37);
    CHECK(low_in_g <= 38);

    // disjoint and covering
    for (const auto& u : part.feature_set) CHECK(part.train_set.count(u) == 0);
    CHECK(part.feature_set.size() + part.train_set.size() == truth.size());
}

TEST_CASE("partition_truth determinism and seed sensitivity") {
    const GroundTruth truth = balanced_truth(100);
    const TruthPartition p1 = partition_truth(truth, 7);
    const TruthPartition p2 = partition_truth(truth, 7);
    CHECK(p1.feature_set == p2.feature_set);
    CHECK(p1.train_set == p2.train_set);

    std::size_t distinct = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        if (partition_truth(truth, seed).feature_set != p1.feature_set) ++distinct;
    }
    CHECK(distinct >= 9);

    GroundTruth tiny;
    tiny.labels = {{"a", IncomeLabel::Low}, {"b", IncomeLabel::High}};
    CHECK_THROWS_AS(partition_truth(tiny, 1), ValidationError);
}

TEST_CASE("ego_ring on paths and stars") {
    const SocialGraph path = build_graph(
        std::vector<CallRecord>{call("a", "b"), call("b", "c")}, {});
    CHECK(ego_ring(path, UserId("a"), 2) == std::vector<UserId>{"c"});
    CHECK(ego_ring(path, UserId("a"), 0) == std::vector<UserId>{"a"});
    CHECK(ego_ring(path, UserId("b"), 0) == std::vector<UserId>{"b"});

    const SocialGraph star = build_graph(
        std::vector<CallRecord>{call("s", "x"), call("s", "y"), call("s", "z")}, {});
    auto ring1 = ego_ring(star, UserId("s"), 1);
    std::sort(ring1.begin(), ring1.end());
    CHECK(ring1 == std::vector<UserId>{"x", "y", "z"});
    CHECK(ego_ring(star, UserId("s"), 2).empty());

    CHECK_THROWS_AS(ego_ring(star, UserId("nope"), 1), ValidationError);
}

TEST_CASE("ego_ring matches the BFS oracle and rings partition the ball") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto recs = testutil::random_records(25, 40, seed);
        const SocialGraph g = build_graph(recs.calls, recs.sms);
        const auto adj = oracle_adjacency(recs.calls, recs.sms);
        for (NodeId v = 0; v < g.node_count(); v += 3) {
            std::set<std::string> seen;
            for (unsigned n = 0; n <= 4; ++n) {
                const auto ring = ego_ring(g, g.name(v), n);
                const std::set<std::string> got(ring.begin(), ring.end());
                CHECK(got == oracle_ring(adj, g.name(v), n));
                for (const auto& u : got) {
                    CHECK(seen.count(u) == 0); // rings pairwise disjoint
                    seen.insert(u);
                }
            }
        }
    }
}

TEST_CASE("level_edges basics") {
    const SocialGraph one = build_graph(std::vector<CallRecord>{call("a", "b")}, {});
    const auto le1 = level_edges(one, UserId("a"), 1);
    REQUIRE(le1.size() == 1);
    CHECK(one.name(le1[0].origin) == "a");
    CHECK(one.name(le1[0].dest) == "b");
    CHECK(le1[0].inner_is_origin);

    // triangle with all mutual edges: no ring-2 nodes
    std::vector<CallRecord> tri;
    for (const auto& [o, d] : std::vector<std::pair<std::string, std::string>>{
             {"a", "b"}, {"b", "a"}, {"a", "c"}, {"c", "a"}, {"b", "c"}, {"c", "b"}}) {
        tri.push_back(call(o, d));
    }
    const SocialGraph triangle = build_graph(tri, {});
    CHECK(level_edges(triangle, UserId("a"), 2).empty());

    const SocialGraph path = build_graph(
        std::vector<CallRecord>{call("a", "b"), call("b", "c")}, {});
    const auto le2 = level_edges(path, UserId("a"), 2);
    REQUIRE(le2.size() == 1);
    CHECK(path.name(le2[0].origin) == "b");
    CHECK(path.name(le2[0].dest) == "c");
    CHECK(le2[0].inner_is_origin);
    CHECK(path.name(le2[0].inner()) == "b");
    CHECK(path.name(le2[0].outer()) == "c");

    CHECK_THROWS_AS(level_edges(path, NodeId{0}, 0), ValidationError);
}

TEST_CASE("level_edges n=1 is exactly the incident edges") {
    const auto recs = testutil::random_records(20, 30, 3);
    const SocialGraph g = build_graph(recs.calls, recs.sms);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        std::size_t incident = 0;
        for (const DirectedEdge& e : g.edges()) {
            incident += e.origin == v || e.dest == v;
        }
        CHECK(level_edges(g, v, 1).size() == incident);
    }
}

TEST_CASE("level_edges disjoint across levels") {
    const auto recs = testutil::random_records(25, 35, 9);
    const SocialGraph g = build_graph(recs.calls, recs.sms);
    for (NodeId v = 0; v < g.node_count(); v += 4) {
        std::set<std::pair<NodeId, NodeId>> seen;
        for (unsigned n = 1; n <= 3; ++n) {
            for (const LevelEdge& e : level_edges(g, v, n)) {
                const auto key = std::make_pair(e.origin, e.dest);
                CHECK(seen.count(key) == 0);
                seen.insert(key);
            }
        }
    }
}

TEST_CASE("eval_nodes full and inner") {
    // h1 - g1 edge; h2 isolated from the feature set.
    const SocialGraph g = build_graph(
        std::vector<CallRecord>{call("h1", "g1"), call("h2", "x")}, {});
    GroundTruth truth;
    truth.labels = {{"h1", IncomeLabel::Low},
                    {"h2", IncomeLabel::High},
                    {"g1", IncomeLabel::High}};
    TruthPartition part;
    part.feature_set = {"g1"};
    part.train_set = {"h1", "h2"};

    CHECK(eval_nodes(g, part, GraphMode::Full) == std::vector<UserId>{"h1", "h2"});
    CHECK(eval_nodes(g, part, GraphMode::Inner) == std::vector<UserId>{"h1"});

    // saturation: all train nodes adjacent to the feature set
    TruthPartition sat;
    sat.feature_set = {"g1", "x"};
    sat.train_set = {"h1", "h2"};
    CHECK(eval_nodes(g, sat, GraphMode::Inner) == eval_nodes(g, sat, GraphMode::Full));

    // vacuous: empty feature set
    TruthPartition empty;
    empty.train_set = {"h1", "h2"};
    CHECK(eval_nodes(g, empty, GraphMode::Inner).empty());

    // literal train-set variant: h1-h2 edge would count
    const SocialGraph g2 = build_graph(
        std::vector<CallRecord>{call("h1", "h2"), call("g1", "x")}, {});
    CHECK(eval_nodes(g2, part, GraphMode::Inner).empty());
    CHECK(eval_nodes(g2, part, GraphMode::Inner, InnerNeighborSet::TrainSet) ==
          std::vector<UserId>{"h1", "h2"});
}
