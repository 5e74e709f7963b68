#include "doctest.h"
#include "fixtures.hpp"

#include "synmine/discovery.hpp"

#include <map>
#include <random>

using namespace synmine;

namespace {

// Independent frequency-rank oracle: stable sort of (count, name) pairs.
std::vector<Activity> frequency_oracle(const EventLog& log) {
    std::vector<std::pair<std::int64_t, Activity>> ranked;
    for (const Activity& a : log.activities())
        ranked.emplace_back(-count_activity(a, log), a);
    std::sort(ranked.begin(), ranked.end());
    std::vector<Activity> order;
    for (const auto& [neg, a] : ranked) order.push_back(a);
    return order;
}

}  // namespace

TEST_CASE("frequency ordering matches the rank oracle") {
    CHECK(order_frequency(fixtures::log_ls()) ==
          frequency_oracle(fixtures::log_ls()));
    CHECK(order_frequency(fixtures::log_l3s()) ==
          frequency_oracle(fixtures::log_l3s()));

    std::mt19937 rng(61);
    std::uniform_int_distribution<int> len(0, 7);
    std::uniform_int_distribution<int> act(0, 4);
    for (int round = 0; round < 30; ++round) {
        EventLog log;
        for (int v = 0; v < 5; ++v) {
            Trace trace;
            int n = len(rng);
            for (int i = 0; i < n; ++i)
                trace.push_back(std::string(1, char('a' + act(rng))));
            log.add_trace(trace, 1 + act(rng));
        }
        CHECK(order_frequency(log) == frequency_oracle(log));
    }
}

TEST_CASE("frequency ordering of the running example") {
    // Counts: h 100, a 100, b 100, c 100, f 100, g 100, d 100, e 54 --
    // all except e tie at 100, so ties go lexicographically.
    CHECK(order_frequency(fixtures::log_ls()) ==
          std::vector<Activity>{"a", "b", "c", "d", "f", "g", "h", "e"});
}

TEST_CASE("breadth-first ordering of the running example") {
    EventLog log = fixtures::log_ls();
    CHECK(order_bfs(log) ==
          std::vector<Activity>{"h", "g", "d", "f", "c", "e", "b", "a"});
    auto blocks = order_bfs_blocks(log);
    REQUIRE(blocks.size() >= 7);
    CHECK(blocks[0] == std::vector<Activity>{"h"});
    CHECK(blocks[1] == std::vector<Activity>{"g", "d"});
    CHECK(blocks[2] == std::vector<Activity>{"f"});
    CHECK(blocks[3] == std::vector<Activity>{"c", "e"});
    CHECK(blocks[4].empty());
    CHECK(blocks[5] == std::vector<Activity>{"b"});
    CHECK(blocks[6] == std::vector<Activity>{"a"});
}

TEST_CASE("orderings are permutations of the activity set") {
    std::mt19937 rng(67);
    std::uniform_int_distribution<int> len(1, 7);
    std::uniform_int_distribution<int> act(0, 5);
    for (int round = 0; round < 30; ++round) {
        EventLog log;
        for (int v = 0; v < 6; ++v) {
            Trace trace;
            int n = len(rng);
            for (int i = 0; i < n; ++i)
                trace.push_back(std::string(1, char('a' + act(rng))));
            log.add_trace(trace);
        }
        for (auto order : {order_frequency(log), order_bfs(log)}) {
            std::set<Activity> seen(order.begin(), order.end());
            CHECK(seen.size() == order.size());
            CHECK(seen == log.activities());
        }
    }
}

TEST_CASE("projected log walks the prefix of the order") {
    EventLog log = fixtures::log_ls();
    std::vector<Activity> order = order_bfs(log);
    CHECK(projected_log(log, order, 3) == fixtures::log_l3s());
    CHECK(projected_log(log, order, order.size()) == log);
    EventLog first = projected_log(log, order, 1);
    CHECK(first.variants().size() == 1);
    CHECK(first.variants().count({"h"}) == 1);
}

TEST_CASE("pruning set on the third walkthrough iteration") {
    auto chain = fixtures::chain_nets();
    const WorkflowNet& w = chain.after_g;
    std::set<NodeId> v =
        pruning_set(w, fixtures::log_l3s(), "d", Rat(9, 10));
    CHECK(v == std::set<NodeId>{w.start, chain.p3, chain.t2, chain.p2,
                                chain.t1});
}

TEST_CASE("pruning set falls back to all nodes when unmapped") {
    auto chain = fixtures::chain_nets();
    const WorkflowNet& w = chain.after_g;
    std::set<NodeId> all;
    for (NodeId n : w.net.places()) all.insert(n);
    for (NodeId n : w.net.transitions()) all.insert(n);

    // No causal context at all: start and end stand in, so the result is
    // everything on a start-to-end path (the whole net minus the source
    // and sink places).
    EventLog weak;
    weak.add_trace({"d", "x"}, 1);
    weak.add_trace({"x", "d"}, 1);
    std::set<NodeId> interior = all;
    interior.erase(w.source);
    interior.erase(w.sink);
    CHECK(pruning_set(w, weak, "d", Rat(9, 10)) == interior);

    // Predecessor h maps to t1, successor absent: end stands in; the
    // path from t1 to end is {t1, p1, end}.
    EventLog after_h;
    after_h.add_trace({"h", "d"}, 10);
    CHECK(pruning_set(w, after_h, "d", Rat(9, 10)) ==
          std::set<NodeId>{chain.t1, chain.p1, w.end});
}

TEST_CASE("selection prefers high F1 above the fitness threshold") {
    EventLog log;
    log.add_trace({"g", "h"}, 95);
    log.add_trace({"h"}, 5);
    auto chain = fixtures::chain_nets();

    std::vector<CandidateNet> candidates;
    CandidateNet plain;
    plain.net = chain.after_g;
    CandidateNet skipping;
    skipping.net = skip(chain.after_g, "g");
    skipping.pattern = PatternTag::skip;
    candidates.push_back(plain);
    candidates.push_back(skipping);

    auto best = select_best(candidates, log, Rat(95, 100), 100'000);
    REQUIRE(best.has_value());
    // The plain chain scores fitness < 1 but precision 1; the skip net
    // fits perfectly at lower precision. Both pass theta = 0.95; compare
    // their F1 directly against fresh scores.
    Score plain_score = score(chain.after_g, log);
    Score skip_score = score(skipping.net, log);
    REQUIRE(plain_score.fitness >= Rat(95, 100));
    Rat best_f1 = std::max(plain_score.f1, skip_score.f1);
    CHECK(best->scores->f1 == best_f1);
    for (const auto& c : candidates) CHECK(c.scores.has_value());

    // An impossible threshold rejects everything.
    EventLog misfit;
    misfit.add_trace({"h", "g", "g"}, 1);
    std::vector<CandidateNet> bad{plain};
    CHECK(!select_best(bad, misfit, Rat(1), 100'000).has_value());
}

TEST_CASE("fall through always returns a usable candidate") {
    auto chain = fixtures::chain_nets();
    EventLog hostile;
    hostile.add_trace({"z", "g", "z", "h", "z"}, 1);
    CandidateNet c = fall_through(chain.after_g, "z", hostile, Rat(1),
                                  EnumerationCaps{}, 100'000);
    CHECK(is_workflow_net(c.net));
    CHECK(is_free_choice(c.net.net));
    CHECK(is_sound(c.net));
    CHECK(!c.net.net.transitions_labeled("z").empty());
}

TEST_CASE("discovery on the running example is sound and fits") {
    DiscoveryConfig config;
    DiscoveryResult result = discover(fixtures::log_ls(), config);
    CHECK(is_workflow_net(result.net));
    CHECK(is_free_choice(result.net.net));
    CHECK(is_sound(result.net));
    CHECK(fitness(result.net, fixtures::log_ls()) >= config.theta);
    CHECK(result.order ==
          std::vector<Activity>{"h", "g", "d", "f", "c", "e", "b", "a"});
    REQUIRE(result.iterations.size() == 8);
    for (std::size_t i = 0; i < result.iterations.size(); ++i) {
        const IterationRecord& rec = result.iterations[i];
        CHECK(rec.index == i + 1);
        CHECK(rec.activity == result.order[i]);
        CHECK(rec.pruned_node_count <= rec.total_node_count);
        CHECK(rec.pruning_ratio ==
              Rat(rec.pruned_node_count, rec.total_node_count));
        CHECK(rec.scores.fitness >= config.theta);
        CHECK(rec.candidate_count > 0);
    }
}

TEST_CASE("discovery is deterministic") {
    DiscoveryConfig config;
    DiscoveryResult a = discover(fixtures::log_ls(), config);
    DiscoveryResult b = discover(fixtures::log_ls(), config);
    CHECK(canonical_key(a.net) == canonical_key(b.net));
    CHECK(a.order == b.order);
}

TEST_CASE("discovery with the frequency ordering also stays sound") {
    DiscoveryConfig config;
    config.ordering = OrderingStrategy::frequency;
    DiscoveryResult result = discover(fixtures::log_ls(), config);
    CHECK(is_sound(result.net));
    CHECK(fitness(result.net, fixtures::log_ls()) >= config.theta);
    CHECK(result.order == order_frequency(fixtures::log_ls()));
}

TEST_CASE("discovery handles tiny and loopy logs") {
    EventLog single;
    single.add_trace({"a"}, 1);
    DiscoveryConfig config;
    DiscoveryResult result = discover(single, config);
    CHECK(is_sound(result.net));
    CHECK(fitness(result.net, single) == Rat(1));

    EventLog loopy;
    loopy.add_trace({"a", "b", "b", "b", "c"}, 5);
    loopy.add_trace({"a", "b", "c"}, 5);
    DiscoveryResult loop_result = discover(loopy, config);
    CHECK(is_sound(loop_result.net));
    CHECK(fitness(loop_result.net, loopy) >= config.theta);
}

TEST_CASE("discovery on an empty log yields the initial net") {
    DiscoveryConfig config;
    DiscoveryResult result = discover(EventLog{}, config);
    CHECK(result.iterations.empty());
    CHECK(canonical_key(result.net) == canonical_key(initial_net()));
}
