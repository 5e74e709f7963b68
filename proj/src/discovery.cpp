#include "synmine/discovery.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace synmine {

namespace {

std::vector<Activity> sort_by_count_desc(
    const std::vector<std::pair<Activity, std::int64_t>>& counted) {
    std::vector<std::pair<Activity, std::int64_t>> sorted = counted;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;  // ties lexicographic
              });
    std::vector<Activity> result;
    result.reserve(sorted.size());
    for (const auto& [activity, count] : sorted) result.push_back(activity);
    return result;
}

}  // namespace

std::vector<Activity> order_frequency(const EventLog& log) {
    auto activities = log.activities();
    if (activities.empty())
        throw std::invalid_argument(
            "cannot order activities of an empty log");
    std::vector<std::pair<Activity, std::int64_t>> counted;
    for (const auto& a : activities)
        counted.emplace_back(a, count_activity(a, log));
    return sort_by_count_desc(counted);
}

std::vector<Activity> sort_preceded(const Activity& a, const EventLog& log) {
    std::vector<std::pair<Activity, std::int64_t>> counted;
    for (const auto& b : log.activities()) {
        std::int64_t count = count_directly_follows(b, a, log);
        if (count > 0) counted.emplace_back(b, count);
    }
    return sort_by_count_desc(counted);
}

std::vector<std::vector<Activity>> order_bfs_blocks(const EventLog& log) {
    auto all = log.activities();
    if (all.empty())
        throw std::invalid_argument(
            "cannot order activities of an empty log");

    std::vector<std::vector<Activity>> blocks;
    std::vector<Activity> gamma;
    std::set<Activity> seen;
    auto append_block = [&](std::vector<Activity> block) {
        for (const auto& a : block) {
            gamma.push_back(a);
            seen.insert(a);
        }
        blocks.push_back(std::move(block));
    };

    append_block(order_frequency(project(log, end_activities(log))));
    for (std::size_t j = 2; j <= all.size(); ++j) {
        if (gamma.size() < j - 1) {
            // Frontier exhausted before covering every activity
            // (disconnected behavior): append the rest by frequency.
            std::vector<Activity> rest;
            for (const auto& a : order_frequency(log))
                if (!seen.count(a)) rest.push_back(a);
            append_block(std::move(rest));
            break;
        }
        std::vector<Activity> block;
        for (const auto& b : sort_preceded(gamma[j - 2], log))
            if (!seen.count(b)) block.push_back(b);
        append_block(std::move(block));
    }
    if (gamma.size() < all.size()) {
        std::vector<Activity> rest;
        for (const auto& a : order_frequency(log))
            if (!seen.count(a)) rest.push_back(a);
        append_block(std::move(rest));
    }
    return blocks;
}

std::vector<Activity> order_bfs(const EventLog& log) {
    std::vector<Activity> gamma;
    for (const auto& block : order_bfs_blocks(log))
        for (const auto& a : block) gamma.push_back(a);
    return gamma;
}

EventLog projected_log(const EventLog& log,
                       const std::vector<Activity>& order, std::size_t i) {
    if (i < 1 || i > order.size())
        throw std::out_of_range("projection index out of range");
    std::set<Activity> keep(order.begin(), order.begin() + i);
    return project(log, keep);
}

std::set<NodeId> pruning_set(const WorkflowNet& w, const EventLog& log_i,
                             const Activity& a, const Rat& c) {
    auto to_transitions = [&](const std::set<Activity>& activities,
                              NodeId fallback) {
        std::set<NodeId> result;
        for (const auto& activity : activities)
            for (NodeId t : w.net.transitions_labeled(activity))
                result.insert(t);
        if (result.empty()) result.insert(fallback);
        return result;
    };
    std::set<NodeId> sources =
        to_transitions(preceding_set(a, log_i, c), w.start);
    std::set<NodeId> targets =
        to_transitions(following_set(a, log_i, c), w.end);

    std::set<NodeId> all_nodes;
    all_nodes.insert(w.net.places().begin(), w.net.places().end());
    all_nodes.insert(w.net.transitions().begin(), w.net.transitions().end());

    std::set<NodeId> nodes;
    try {
        nodes = elementary_path_nodes(w.net, sources, targets);
    } catch (const InconclusiveError&) {
        return all_nodes;
    }
    if (nodes.empty()) return all_nodes;
    return nodes;
}

std::optional<CandidateNet> select_best(std::vector<CandidateNet>& candidates,
                                        const EventLog& log_i,
                                        const Rat& theta,
                                        std::size_t state_cap) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        CandidateNet& candidate = candidates[i];
        candidate.scores = score(candidate.net, log_i, state_cap);
        if (candidate.scores->fitness < theta) continue;
        if (!best) {
            best = i;
            continue;
        }
        const CandidateNet& current = candidates[*best];
        if (candidate.scores->f1 != current.scores->f1) {
            if (candidate.scores->f1 > current.scores->f1) best = i;
        } else if (candidate.net.net.node_count() <
                   current.net.net.node_count()) {
            best = i;
        }
        // Remaining ties keep the earlier candidate; the input is
        // already in canonical order.
    }
    if (!best) return std::nullopt;
    return candidates[*best];
}

namespace {

// The construction that always succeeds: a parallel branch for `a`
// between start and end, made skippable and loopable.
CandidateNet guaranteed_branch(const WorkflowNet& w, const Activity& a) {
    WorkflowNet host = w;
    try {
        RuleResult placed =
            apply_extended_place_rule(host, {host.start}, {host.end}, a);
        WorkflowNet looped = loop_strict(skip(placed.net, a), a);
        return {std::move(looped),
                {RuleKind::extended_place, {w.start}, {w.end}, a},
                PatternTag::skip_loop,
                std::nullopt};
    } catch (const StructureError&) {
        // The end transition shares its input place with another
        // transition; insulate it behind a private place first.
        RuleResult insulated = apply_dual_abstraction(
            host, host.net.preset(host.end), {host.end}, std::nullopt);
        host = insulated.net;
        RuleResult placed =
            apply_extended_place_rule(host, {host.start}, {host.end}, a);
        WorkflowNet looped = loop_strict(skip(placed.net, a), a);
        return {std::move(looped),
                {RuleKind::extended_place, {w.start}, {w.end}, a},
                PatternTag::skip_loop,
                std::nullopt};
    }
}

}  // namespace

CandidateNet fall_through(const WorkflowNet& w, const Activity& a,
                          const EventLog& log_i, const Rat& theta,
                          const EnumerationCaps& caps,
                          std::size_t state_cap) {
    std::set<NodeId> all_nodes;
    all_nodes.insert(w.net.places().begin(), w.net.places().end());
    all_nodes.insert(w.net.transitions().begin(), w.net.transitions().end());
    std::vector<CandidateNet> candidates = candidate_set(w, all_nodes, a,
                                                         caps);
    if (auto best = select_best(candidates, log_i, theta, state_cap))
        return *best;
    CandidateNet fallback = guaranteed_branch(w, a);
    fallback.scores = score(fallback.net, log_i, state_cap);
    return fallback;
}

DiscoveryResult discover(const EventLog& log, const DiscoveryConfig& config) {
    DiscoveryResult result;
    if (log.activities().empty()) {
        // Nothing to place: the empty-run net already fits.
        result.net = initial_net();
        return result;
    }
    result.order = config.ordering == OrderingStrategy::bfs
                       ? order_bfs(log)
                       : order_frequency(log);
    result.net = initial_net();

    for (std::size_t i = 1; i <= result.order.size(); ++i) {
        auto started = std::chrono::steady_clock::now();
        const Activity& a = result.order[i - 1];
        EventLog log_i = projected_log(log, result.order, i);

        IterationRecord record;
        record.index = i;
        record.activity = a;
        record.projected_variant_count =
            static_cast<std::int64_t>(log_i.variants().size());
        record.total_node_count = result.net.net.node_count();

        std::set<NodeId> all_nodes;
        all_nodes.insert(result.net.net.places().begin(),
                         result.net.net.places().end());
        all_nodes.insert(result.net.net.transitions().begin(),
                         result.net.net.transitions().end());
        // The first iteration has no labeled transitions to anchor the
        // heuristics; use the whole (5-node) initial net.
        std::set<NodeId> V =
            i == 1 ? all_nodes
                   : pruning_set(result.net, log_i, a,
                                 config.causal_threshold);
        record.pruned_node_count = V.size();
        record.pruning_ratio =
            Rat(static_cast<std::int64_t>(V.size()),
                static_cast<std::int64_t>(record.total_node_count));

        std::vector<CandidateNet> candidates;
        try {
            candidates = candidate_set(result.net, V, a, config.caps);
            record.candidate_count = candidates.size();
            auto best = select_best(candidates, log_i, config.theta,
                                    config.state_cap);
            if (!best) {
                record.fall_through = true;
                best = fall_through(result.net, a, log_i, config.theta,
                                    config.caps, config.state_cap);
            }
            record.selected = {best->base_rule, best->pattern};
            record.scores = *best->scores;
            result.net = best->net;
        } catch (const InconclusiveError& e) {
            throw InconclusiveError("iteration " + std::to_string(i) + " (" +
                                    a + "): " + e.what());
        }

        record.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          started)
                .count();
        result.iterations.push_back(std::move(record));
    }
    return result;
}

}  // namespace synmine
