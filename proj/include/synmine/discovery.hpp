#pragma once

#include "synmine/conformance.hpp"
#include "synmine/event_log.hpp"
#include "synmine/patterns.hpp"
#include "synmine/petri_net.hpp"
#include "synmine/synthesis.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace synmine {

enum class OrderingStrategy { frequency, bfs };

struct DiscoveryConfig {
    Rat theta = Rat(95, 100);            // replay fitness threshold
    Rat causal_threshold = Rat(9, 10);   // c
    OrderingStrategy ordering = OrderingStrategy::bfs;
    EnumerationCaps caps;
    std::size_t state_cap = 100'000;
    // Scores of all candidates (not only the selected one) are kept in
    // the iteration records when set.
    bool record_all_scores = false;
};

struct SelectedProvenance {
    RuleApplication rule;
    PatternTag pattern = PatternTag::none;
};

struct IterationRecord {
    std::size_t index = 0;
    Activity activity;
    std::int64_t projected_variant_count = 0;
    std::size_t pruned_node_count = 0;   // |V^i|
    std::size_t total_node_count = 0;    // |P^i u T^i|
    Rat pruning_ratio;                   // |V^i| / |P^i u T^i|
    std::size_t candidate_count = 0;
    SelectedProvenance selected;
    Score scores;
    bool fall_through = false;
    double wall_time_seconds = 0.0;
};

// Activity orderings.
std::vector<Activity> order_frequency(const EventLog& log);
std::vector<Activity> sort_preceded(const Activity& a, const EventLog& log);
std::vector<Activity> order_bfs(const EventLog& log);

// Block decomposition behind order_bfs, exposed for inspection: one
// (possibly empty) block per position of the order.
std::vector<std::vector<Activity>> order_bfs_blocks(const EventLog& log);

// Projection onto the first i activities of the order (1-based).
EventLog projected_log(const EventLog& log,
                       const std::vector<Activity>& order, std::size_t i);

// Nodes on elementary paths between the transitions of a's causal
// predecessors and successors; start/end stand in for empty sets, and
// the whole node set is the fallback when no path connects them.
std::set<NodeId> pruning_set(const WorkflowNet& w, const EventLog& log_i,
                             const Activity& a, const Rat& c);

// Scores candidates on log_i, drops fitness < theta, returns the best F1
// (ties: fewer nodes, then canonical order). Mutates the candidates'
// scores in place.
std::optional<CandidateNet> select_best(std::vector<CandidateNet>& candidates,
                                        const EventLog& log_i,
                                        const Rat& theta,
                                        std::size_t state_cap);

// Last resort: unconstrained candidate generation, then the guaranteed
// construction (a parallel, skippable, loopable branch for `a`).
CandidateNet fall_through(const WorkflowNet& w, const Activity& a,
                          const EventLog& log_i, const Rat& theta,
                          const EnumerationCaps& caps, std::size_t state_cap);

struct DiscoveryResult {
    WorkflowNet net;
    std::vector<Activity> order;
    std::vector<IterationRecord> iterations;
};

DiscoveryResult discover(const EventLog& log, const DiscoveryConfig& config);

}  // namespace synmine
