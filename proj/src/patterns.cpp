#include "synmine/patterns.hpp"

#include <algorithm>

namespace synmine {

std::string to_string(PatternTag tag) {
    switch (tag) {
        case PatternTag::none: return "none";
        case PatternTag::skip: return "skip";
        case PatternTag::loop_strict: return "loop_strict";
        case PatternTag::loop_tau: return "loop_tau";
        case PatternTag::skip_loop: return "skip_loop";
    }
    return "?";
}

namespace {

NodeId unique_labeled_transition(const WorkflowNet& w, const Activity& a) {
    auto matches = w.net.transitions_labeled(a);
    if (matches.empty())
        throw StructureError("no transition labeled '" + a + "'");
    if (matches.size() > 1)
        throw StructureError("multiple transitions labeled '" + a + "'");
    return matches.front();
}

// Guard for the loop functions: some join transition downstream of t_a's
// postset would share only part of its preset with the back-transition.
bool needs_reroute(const WorkflowNet& w, NodeId t_a) {
    for (NodeId p : w.net.postset(t_a)) {
        for (NodeId t_star : w.net.postset(p)) {
            const auto& pre = w.net.preset(t_star);
            if (pre.size() <= 1) continue;
            bool outside = std::any_of(
                pre.begin(), pre.end(),
                [&](NodeId q) { return !w.net.has_arc(t_a, q); });
            if (outside) return true;
        }
    }
    return false;
}

// Case 2 of the loop functions: reroute t_a's entire postset through a
// fresh place/transition pair so the back-transition sees a private
// place.
WorkflowNet reroute_postset(const WorkflowNet& w, NodeId t_a) {
    RuleResult rerouted =
        apply_abstraction(w, {t_a}, w.net.postset(t_a), std::nullopt);
    return rerouted.net;
}

WorkflowNet add_back_transition(const WorkflowNet& w, NodeId t_a,
                                bool swap_labels, const Activity& a) {
    RuleResult result = apply_transition_rule(w, w.net.postset(t_a),
                                              w.net.preset(t_a), std::nullopt);
    if (swap_labels) {
        result.net.net.set_label(t_a, std::nullopt);
        result.net.net.set_label(*result.new_transition, a);
    }
    return result.net;
}

WorkflowNet loop_impl(const WorkflowNet& w, const Activity& a,
                      bool swap_labels) {
    NodeId t_a = unique_labeled_transition(w, a);
    if (!needs_reroute(w, t_a))
        return add_back_transition(w, t_a, swap_labels, a);
    WorkflowNet rerouted = reroute_postset(w, t_a);
    // After the reroute t_a feeds a private place, so the first case
    // applies directly.
    return add_back_transition(rerouted, t_a, swap_labels, a);
}

}  // namespace

WorkflowNet skip(const WorkflowNet& w, const Activity& a) {
    NodeId t_a = unique_labeled_transition(w, a);
    RuleResult result = apply_transition_rule(w, w.net.preset(t_a),
                                              w.net.postset(t_a),
                                              std::nullopt);
    return result.net;
}

WorkflowNet loop_strict(const WorkflowNet& w, const Activity& a) {
    return loop_impl(w, a, /*swap_labels=*/false);
}

WorkflowNet loop_tau(const WorkflowNet& w, const Activity& a) {
    return loop_impl(w, a, /*swap_labels=*/true);
}

std::vector<CandidateNet> candidate_set(const WorkflowNet& w,
                                        const std::set<NodeId>& V,
                                        const Activity& a,
                                        const EnumerationCaps& caps) {
    std::vector<BaseCandidate> base = enumerate_applications(w, V, a, caps);

    std::vector<CandidateNet> out;
    std::vector<std::string> keys;
    std::set<std::string> seen;
    auto add = [&](WorkflowNet net, const RuleApplication& rule,
                   PatternTag tag) {
        std::string key = canonical_key(net);
        if (!seen.insert(key).second) return;
        out.push_back({std::move(net), rule, tag, std::nullopt});
        keys.push_back(std::move(key));
    };

    for (const auto& candidate : base) {
        add(candidate.net, candidate.rule, PatternTag::none);
        auto attempt = [&](PatternTag tag, auto&& build) {
            try {
                add(build(), candidate.rule, tag);
            } catch (const StructureError&) {
                // best-effort: infeasible patterns are dropped
            }
        };
        attempt(PatternTag::skip, [&] { return skip(candidate.net, a); });
        attempt(PatternTag::loop_strict,
                [&] { return loop_strict(candidate.net, a); });
        attempt(PatternTag::loop_tau,
                [&] { return loop_tau(candidate.net, a); });
        attempt(PatternTag::skip_loop,
                [&] { return loop_strict(skip(candidate.net, a), a); });
    }

    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) {
                         return keys[x] < keys[y];
                     });
    std::vector<CandidateNet> sorted;
    sorted.reserve(order.size());
    for (std::size_t i : order) sorted.push_back(std::move(out[i]));
    return sorted;
}

}  // namespace synmine
