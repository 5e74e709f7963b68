#include "synmine/conformance.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace synmine {

namespace {

struct SearchState {
    Marking marking;
    std::size_t position;

    auto operator<=>(const SearchState&) const = default;
};

struct Incoming {
    SearchState parent;
    Move move;
};

}  // namespace

Alignment optimal_alignment(const WorkflowNet& w, const Trace& trace,
                            std::size_t state_cap) {
    const LabeledNet& net = w.net;
    SearchState start{initial_marking(w), 0};
    SearchState goal{final_marking(w), trace.size()};

    std::map<SearchState, std::int64_t> dist;
    std::map<SearchState, Incoming> parent;
    // Deterministic uniform-cost search: the frontier is ordered by
    // (cost, state), so pops do not depend on insertion order.
    std::set<std::pair<std::int64_t, SearchState>> frontier;
    dist[start] = 0;
    frontier.insert({0, start});

    auto relax = [&](const SearchState& from, const SearchState& to,
                     std::int64_t cost, Move move) {
        std::int64_t candidate = dist.at(from) + cost;
        auto it = dist.find(to);
        // Only strict improvements rewire the parent: equal-cost
        // rewiring could form cycles through zero-cost moves. The result
        // is still deterministic because the frontier pops in (cost,
        // state) order and moves are relaxed in a fixed order.
        if (it == dist.end() || candidate < it->second) {
            if (it != dist.end()) frontier.erase({it->second, to});
            dist[to] = candidate;
            parent[to] = {from, std::move(move)};
            frontier.insert({candidate, to});
        }
    };

    while (!frontier.empty()) {
        auto [cost, state] = *frontier.begin();
        frontier.erase(frontier.begin());
        if (state == goal) break;
        if (dist.size() > state_cap)
            throw InconclusiveError("alignment search exceeded state cap");

        // Synchronous and model moves.
        for (NodeId t : enabled(net, state.marking)) {
            Marking next = fire(net, state.marking, t);
            auto label = net.label(t);
            if (!label) {
                relax(state, {next, state.position}, 0,
                      {MoveKind::model_move_silent, {}, t});
            } else {
                if (state.position < trace.size() &&
                    trace[state.position] == *label)
                    relax(state, {next, state.position + 1}, 0,
                          {MoveKind::synchronous, *label, t});
                relax(state, {next, state.position}, 1,
                      {MoveKind::model_move_visible, {}, t});
            }
        }
        // Log move.
        if (state.position < trace.size())
            relax(state, {state.marking, state.position + 1}, 1,
                  {MoveKind::log_move, trace[state.position], {}});
    }

    auto goal_it = dist.find(goal);
    if (goal_it == dist.end())
        throw InconclusiveError(
            "alignment search exhausted without reaching the final marking");

    Alignment alignment;
    alignment.cost = goal_it->second;
    SearchState cursor = goal;
    while (!(cursor == start)) {
        const Incoming& in = parent.at(cursor);
        alignment.moves.push_back(in.move);
        cursor = in.parent;
    }
    std::reverse(alignment.moves.begin(), alignment.moves.end());
    return alignment;
}

std::int64_t empty_trace_model_cost(const WorkflowNet& w,
                                    std::size_t state_cap) {
    const LabeledNet& net = w.net;
    Marking start = initial_marking(w);
    Marking goal = final_marking(w);
    std::map<Marking, std::int64_t> dist;
    std::set<std::pair<std::int64_t, Marking>> frontier;
    dist[start] = 0;
    frontier.insert({0, start});
    while (!frontier.empty()) {
        auto [cost, marking] = *frontier.begin();
        frontier.erase(frontier.begin());
        if (marking == goal) return cost;
        if (dist.size() > state_cap)
            throw InconclusiveError(
                "empty-trace cost search exceeded state cap");
        for (NodeId t : enabled(net, marking)) {
            Marking next = fire(net, marking, t);
            std::int64_t step = net.label(t) ? 1 : 0;
            auto it = dist.find(next);
            if (it == dist.end() || cost + step < it->second) {
                if (it != dist.end()) frontier.erase({it->second, next});
                dist[next] = cost + step;
                frontier.insert({cost + step, next});
            }
        }
    }
    throw InconclusiveError("final marking unreachable from source");
}

Rat fitness(const WorkflowNet& w, const EventLog& log,
            std::size_t state_cap) {
    if (log.empty()) return 1;
    std::int64_t empty_cost = empty_trace_model_cost(w, state_cap);
    Rat weighted_sum = 0;
    for (const auto& [trace, count] : log.variants()) {
        Alignment alignment = optimal_alignment(w, trace, state_cap);
        std::int64_t denominator =
            static_cast<std::int64_t>(trace.size()) + empty_cost;
        Rat per_trace = denominator == 0
                            ? Rat(1)
                            : Rat(1) - Rat(alignment.cost, denominator);
        weighted_sum += per_trace * count;
    }
    return weighted_sum / log.total_traces();
}

namespace {

// Visible activities executable from `m` through silent firings only.
std::set<Activity> silently_enabled_activities(const LabeledNet& net,
                                               const Marking& m,
                                               std::size_t state_cap) {
    std::set<Activity> result;
    std::set<Marking> seen{m};
    std::deque<Marking> queue{m};
    while (!queue.empty()) {
        Marking current = queue.front();
        queue.pop_front();
        if (seen.size() > state_cap)
            throw InconclusiveError("silent closure exceeded state cap");
        for (NodeId t : enabled(net, current)) {
            if (auto label = net.label(t)) {
                result.insert(*label);
            } else {
                Marking next = fire(net, current, t);
                if (seen.insert(next).second) queue.push_back(next);
            }
        }
    }
    return result;
}

}  // namespace

Rat precision(const WorkflowNet& w, const EventLog& log,
              std::size_t state_cap) {
    if (log.empty()) return 1;
    const LabeledNet& net = w.net;

    struct StateStats {
        Rat weight = 0;
        std::set<Activity> observed;
        std::set<Marking> markings;
    };
    // States are keyed by the multiset of visible labels replayed so far,
    // not by the reached marking. Marking-keyed states merge "go around the
    // loop again" with "leave the loop" (a loop returns to the very same
    // marking), so unused loop-backs never look escaping; the label multiset
    // keeps loop revisits apart because each pass adds a copy. It also
    // avoids splitting equivalent replays whose alignments merely fired a
    // silent transition at different points: such replays share the multiset
    // even when their intermediate markings differ. The enabled set of a
    // state is the union over the markings its replays actually reached.
    using StateKey = std::map<Activity, std::size_t>;
    std::map<StateKey, StateStats> stats;
    std::map<Marking, std::set<Activity>> enabled_cache;

    auto enabled_at = [&](const Marking& m) -> const std::set<Activity>& {
        auto it = enabled_cache.find(m);
        if (it == enabled_cache.end())
            it = enabled_cache
                     .emplace(m, silently_enabled_activities(net, m,
                                                             state_cap))
                     .first;
        return it->second;
    };

    for (const auto& [trace, count] : log.variants()) {
        Alignment alignment = optimal_alignment(w, trace, state_cap);
        Marking marking = initial_marking(w);
        std::map<Activity, std::size_t> replayed;
        for (const Move& move : alignment.moves) {
            switch (move.kind) {
                case MoveKind::log_move:
                    break;
                case MoveKind::model_move_silent:
                    marking = fire(net, marking, *move.transition);
                    break;
                case MoveKind::synchronous:
                case MoveKind::model_move_visible: {
                    const Activity& label = *net.label(*move.transition);
                    auto& entry = stats[replayed];
                    entry.weight += count;
                    entry.observed.insert(label);
                    entry.markings.insert(marking);
                    ++replayed[label];
                    marking = fire(net, marking, *move.transition);
                    break;
                }
            }
        }
        // Termination counts as a visit with nothing observed.
        auto& last = stats[replayed];
        last.weight += count;
        last.markings.insert(marking);
    }

    Rat escaping = 0;
    Rat total = 0;
    for (const auto& [key, entry] : stats) {
        std::set<Activity> enabled_set;
        for (const Marking& m : entry.markings) {
            const auto& at = enabled_at(m);
            enabled_set.insert(at.begin(), at.end());
        }
        std::size_t unobserved = 0;
        for (const auto& activity : enabled_set)
            if (!entry.observed.count(activity)) ++unobserved;
        escaping += entry.weight * static_cast<std::int64_t>(unobserved);
        total += entry.weight * static_cast<std::int64_t>(enabled_set.size());
    }
    if (total == 0) return 1;
    return Rat(1) - escaping / total;
}

Rat f1(const Rat& fitness, const Rat& precision) {
    if (fitness + precision == 0) return 0;
    return 2 * fitness * precision / (fitness + precision);
}

Score score(const WorkflowNet& w, const EventLog& log,
            std::size_t state_cap) {
    Score s;
    s.fitness = fitness(w, log, state_cap);
    s.precision = precision(w, log, state_cap);
    s.f1 = f1(s.fitness, s.precision);
    return s;
}

}  // namespace synmine
