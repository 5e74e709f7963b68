#include "synmine/synthesis.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace synmine {

std::string to_string(RuleKind kind) {
    switch (kind) {
        case RuleKind::abstraction: return "abstraction";
        case RuleKind::dual_abstraction: return "dual_abstraction";
        case RuleKind::place: return "place";
        case RuleKind::transition: return "transition";
        case RuleKind::extended_place: return "extended_place";
    }
    return "?";
}

bool in_span(const std::vector<RatVec>& vectors, const RatVec& target) {
    if (vectors.empty())
        return std::all_of(target.begin(), target.end(),
                           [](const Rat& x) { return x == 0; });
    std::size_t dim = target.size();
    // Reduced basis with recorded pivot columns.
    std::vector<RatVec> basis;
    std::vector<std::size_t> pivots;
    auto reduce = [&](RatVec v) {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (v[pivots[i]] == 0) continue;
            Rat factor = v[pivots[i]];
            for (std::size_t c = 0; c < dim; ++c)
                v[c] -= factor * basis[i][c];
        }
        return v;
    };
    for (const auto& row : vectors) {
        if (row.size() != dim)
            throw StructureError("dimension mismatch in span check");
        RatVec v = reduce(row);
        auto nz = std::find_if(v.begin(), v.end(),
                               [](const Rat& x) { return x != 0; });
        if (nz == v.end()) continue;
        std::size_t pivot = nz - v.begin();
        Rat lead = v[pivot];
        for (auto& x : v) x /= lead;
        basis.push_back(std::move(v));
        pivots.push_back(pivot);
    }
    RatVec residual = reduce(target);
    return std::all_of(residual.begin(), residual.end(),
                       [](const Rat& x) { return x == 0; });
}

bool is_linearly_dependent_place(const IncidenceMatrix& m,
                                 const RatVec& new_row) {
    if (new_row.size() != m.transition_order.size())
        throw StructureError("dependence check: row dimension mismatch");
    std::vector<RatVec> rows;
    for (const auto& row : m.entries) {
        RatVec r(row.size());
        for (std::size_t c = 0; c < row.size(); ++c) r[c] = row[c];
        rows.push_back(std::move(r));
    }
    return in_span(rows, new_row);
}

bool is_linearly_dependent_transition(const IncidenceMatrix& m,
                                      const RatVec& new_column) {
    if (new_column.size() != m.place_order.size())
        throw StructureError("dependence check: column dimension mismatch");
    std::vector<RatVec> columns;
    for (std::size_t c = 0; c < m.transition_order.size(); ++c) {
        RatVec col(m.place_order.size());
        for (std::size_t r = 0; r < m.place_order.size(); ++r)
            col[r] = m.entries[r][c];
        columns.push_back(std::move(col));
    }
    return in_span(columns, new_column);
}

namespace {

void assert_structure(const WorkflowNet& w) {
    if (auto violation = free_choice_violation(w.net))
        throw StructureError("free-choice violated by transitions " +
                             w.net.name(violation->first) + ", " +
                             w.net.name(violation->second));
    std::string diagnosis = workflow_net_diagnosis(w);
    if (!diagnosis.empty())
        throw StructureError("not a WF-net: " + diagnosis);
}

void require_transitions(const LabeledNet& net, const std::set<NodeId>& xs,
                         const char* what) {
    if (xs.empty()) throw StructureError(std::string(what) + " is empty");
    for (NodeId x : xs)
        if (!net.is_transition(x))
            throw StructureError(std::string(what) +
                                 " contains a non-transition");
}

void require_places(const LabeledNet& net, const std::set<NodeId>& xs,
                    const char* what) {
    if (xs.empty()) throw StructureError(std::string(what) + " is empty");
    for (NodeId x : xs)
        if (!net.is_place(x))
            throw StructureError(std::string(what) + " contains a non-place");
}

// Row of place p in the incidence matrix of `net`, indexed by the
// matrix's transition order.
RatVec place_row(const LabeledNet& net, const IncidenceMatrix& m, NodeId p) {
    RatVec row(m.transition_order.size());
    for (std::size_t c = 0; c < m.transition_order.size(); ++c)
        row[c] = m.entries[m.place_index(p)][c];
    return row;
}

RatVec transition_column(const IncidenceMatrix& m, NodeId t) {
    RatVec col(m.place_order.size());
    std::size_t idx = m.transition_index(t);
    for (std::size_t r = 0; r < m.place_order.size(); ++r)
        col[r] = m.entries[r][idx];
    return col;
}

// Dependence of `node` within the short-circuited net: its row/column
// against the span of all the others.
bool dependent_in_sc(const WorkflowNet& w, NodeId node, bool as_place) {
    auto [sc, feedback] = short_circuit(w);
    IncidenceMatrix m = incidence(sc);
    if (as_place) {
        RatVec target = place_row(sc, m, node);
        std::vector<RatVec> others;
        for (NodeId p : sc.places())
            if (p != node) others.push_back(place_row(sc, m, p));
        return in_span(others, target);
    }
    RatVec target = transition_column(m, node);
    std::vector<RatVec> others;
    for (NodeId t : sc.transitions())
        if (t != node) others.push_back(transition_column(m, t));
    return in_span(others, target);
}

bool siphon_condition_holds(const WorkflowNet& w) {
    auto [sc, feedback] = short_circuit(w);
    std::set<NodeId> allowed = sc.places();
    allowed.erase(w.source);
    return max_siphon_within(sc, allowed).empty();
}

}  // namespace

RuleResult apply_abstraction(const WorkflowNet& w, const std::set<NodeId>& R,
                             const std::set<NodeId>& S,
                             const std::optional<Activity>& label) {
    require_transitions(w.net, R, "R");
    require_places(w.net, S, "S");
    for (NodeId r : R)
        for (NodeId s : S)
            if (!w.net.has_arc(r, s))
                throw StructureError("R x S is not fully connected");
    RuleResult result{w, {}, {}};
    for (NodeId r : R)
        for (NodeId s : S) result.net.net.remove_arc(r, s);
    NodeId p = result.net.net.add_place();
    NodeId t = result.net.net.add_transition(label);
    for (NodeId r : R) result.net.net.add_arc(r, p);
    result.net.net.add_arc(p, t);
    for (NodeId s : S) result.net.net.add_arc(t, s);
    result.new_place = p;
    result.new_transition = t;
    assert_structure(result.net);
    return result;
}

RuleResult apply_dual_abstraction(const WorkflowNet& w,
                                  const std::set<NodeId>& S,
                                  const std::set<NodeId>& R,
                                  const std::optional<Activity>& label) {
    require_places(w.net, S, "S");
    require_transitions(w.net, R, "R");
    for (NodeId s : S)
        for (NodeId r : R)
            if (!w.net.has_arc(s, r))
                throw StructureError("S x R is not fully connected");
    // Only the two cases from the soundness proof keep the result
    // free-choice.
    std::set<NodeId> preset_of_R;
    for (NodeId r : R) {
        const auto& pre = w.net.preset(r);
        preset_of_R.insert(pre.begin(), pre.end());
    }
    std::set<NodeId> postset_of_S;
    for (NodeId s : S) {
        const auto& post = w.net.postset(s);
        postset_of_S.insert(post.begin(), post.end());
    }
    if (S != preset_of_R && R != postset_of_S)
        throw StructureError(
            "dual abstraction requires S = preset(R) or R = postset(S)");
    RuleResult result{w, {}, {}};
    for (NodeId s : S)
        for (NodeId r : R) result.net.net.remove_arc(s, r);
    NodeId t = result.net.net.add_transition(label);
    NodeId p = result.net.net.add_place();
    for (NodeId s : S) result.net.net.add_arc(s, t);
    result.net.net.add_arc(t, p);
    for (NodeId r : R) result.net.net.add_arc(p, r);
    result.new_place = p;
    result.new_transition = t;
    assert_structure(result.net);
    return result;
}

RuleResult apply_place_rule(const WorkflowNet& w,
                            const std::set<NodeId>& preset,
                            const std::set<NodeId>& postset) {
    if (preset.empty() && postset.empty())
        throw StructureError("place rule needs a non-empty preset/postset");
    if (!preset.empty()) require_transitions(w.net, preset, "preset");
    if (!postset.empty()) require_transitions(w.net, postset, "postset");
    RuleResult result{w, {}, {}};
    NodeId p = result.net.net.add_place();
    for (NodeId t : preset) result.net.net.add_arc(t, p);
    for (NodeId t : postset) result.net.net.add_arc(p, t);
    result.new_place = p;
    if (!dependent_in_sc(result.net, p, /*as_place=*/true))
        throw StructureError("new place is not linearly dependent");
    if (!siphon_condition_holds(result.net))
        throw StructureError(
            "a siphon avoiding the source place would be created");
    assert_structure(result.net);
    return result;
}

RuleResult apply_transition_rule(const WorkflowNet& w,
                                 const std::set<NodeId>& preset,
                                 const std::set<NodeId>& postset,
                                 const std::optional<Activity>& label) {
    if (preset.empty() && postset.empty())
        throw StructureError(
            "transition rule needs a non-empty preset/postset");
    if (!preset.empty()) require_places(w.net, preset, "preset");
    if (!postset.empty()) require_places(w.net, postset, "postset");
    RuleResult result{w, {}, {}};
    NodeId t = result.net.net.add_transition(label);
    for (NodeId p : preset) result.net.net.add_arc(p, t);
    for (NodeId p : postset) result.net.net.add_arc(t, p);
    result.new_transition = t;
    if (!dependent_in_sc(result.net, t, /*as_place=*/false))
        throw StructureError("new transition is not linearly dependent");
    assert_structure(result.net);
    return result;
}

RuleResult apply_extended_place_rule(const WorkflowNet& w,
                                     const std::set<NodeId>& preset,
                                     const std::set<NodeId>& postset,
                                     const Activity& label) {
    RuleResult placed = apply_place_rule(w, preset, postset);
    NodeId p_prime = *placed.new_place;
    // Every transition in preset(p') connects to p', so psi_A applies
    // directly between them.
    RuleResult result = apply_abstraction(
        placed.net, placed.net.net.preset(p_prime), {p_prime}, label);
    return result;
}

namespace {

// Subsets of `universe` with 1..max_size elements, in deterministic
// (size, lexicographic) order.
std::vector<std::set<NodeId>> bounded_subsets(const std::set<NodeId>& universe,
                                              std::size_t max_size) {
    std::vector<NodeId> items(universe.begin(), universe.end());
    std::vector<std::set<NodeId>> result;
    std::vector<NodeId> current;
    std::function<void(std::size_t, std::size_t)> recurse =
        [&](std::size_t start, std::size_t remaining) {
            if (!current.empty())
                result.emplace_back(current.begin(), current.end());
            if (remaining == 0) return;
            for (std::size_t i = start; i < items.size(); ++i) {
                current.push_back(items[i]);
                recurse(i + 1, remaining - 1);
                current.pop_back();
            }
        };
    recurse(0, max_size);
    std::stable_sort(result.begin(), result.end(),
                     [](const auto& a, const auto& b) {
                         if (a.size() != b.size()) return a.size() < b.size();
                         return a < b;
                     });
    return result;
}

bool sets_intersect(const std::set<NodeId>& a, const std::set<NodeId>& b) {
    return std::any_of(a.begin(), a.end(),
                       [&](NodeId x) { return b.count(x) != 0; });
}

}  // namespace

std::vector<BaseCandidate> enumerate_applications(const WorkflowNet& w,
                                                  const std::set<NodeId>& V,
                                                  const Activity& a,
                                                  const EnumerationCaps& caps) {
    std::set<NodeId> v_places, v_transitions;
    for (NodeId n : V) {
        if (w.net.is_place(n)) v_places.insert(n);
        else if (w.net.is_transition(n)) v_transitions.insert(n);
    }

    std::vector<BaseCandidate> out;
    std::vector<std::string> keys;
    std::set<std::string> seen;
    auto try_candidate = [&](RuleApplication rule,
                             const std::function<RuleResult()>& build) {
        try {
            RuleResult result = build();
            std::string key = canonical_key(result.net);
            if (seen.insert(key).second) {
                out.push_back({std::move(result.net), std::move(rule)});
                keys.push_back(std::move(key));
            }
        } catch (const StructureError&) {
            // infeasible application
        }
    };

    // psi_A: R and S fully connected inside V.
    for (const auto& R : bounded_subsets(v_transitions,
                                         caps.max_abstraction_set)) {
        std::set<NodeId> common;
        bool first = true;
        for (NodeId r : R) {
            const auto& post = w.net.postset(r);
            if (first) {
                for (NodeId p : post)
                    if (v_places.count(p)) common.insert(p);
                first = false;
            } else {
                std::set<NodeId> next;
                for (NodeId p : common)
                    if (post.count(p)) next.insert(p);
                common = std::move(next);
            }
        }
        if (common.empty()) continue;
        for (const auto& S : bounded_subsets(common,
                                             caps.max_abstraction_set)) {
            try_candidate({RuleKind::abstraction, R, S, a},
                          [&] { return apply_abstraction(w, R, S, a); });
        }
    }

    // psi_D: S and R fully connected inside V.
    for (const auto& S : bounded_subsets(v_places,
                                         caps.max_abstraction_set)) {
        std::set<NodeId> common;
        bool first = true;
        for (NodeId s : S) {
            const auto& post = w.net.postset(s);
            if (first) {
                for (NodeId t : post)
                    if (v_transitions.count(t)) common.insert(t);
                first = false;
            } else {
                std::set<NodeId> next;
                for (NodeId t : common)
                    if (post.count(t)) next.insert(t);
                common = std::move(next);
            }
        }
        if (common.empty()) continue;
        for (const auto& R : bounded_subsets(common,
                                             caps.max_abstraction_set)) {
            try_candidate({RuleKind::dual_abstraction, S, R, a},
                          [&] { return apply_dual_abstraction(w, S, R, a); });
        }
    }

    // psi_T: a preset not matching any existing one would overlap some
    // transition's preset and break free-choice, so presets are drawn
    // from the existing ones.
    std::set<std::set<NodeId>> transition_presets;
    for (NodeId t : w.net.transitions()) {
        const auto& pre = w.net.preset(t);
        if (pre.empty()) continue;
        if (std::all_of(pre.begin(), pre.end(),
                        [&](NodeId p) { return v_places.count(p) != 0; }))
            transition_presets.insert(pre);
    }
    for (const auto& preset : transition_presets) {
        for (const auto& postset : bounded_subsets(v_places,
                                                   caps.max_linear_set)) {
            if (!caps.allow_self_loops && sets_intersect(preset, postset))
                continue;
            try_candidate(
                {RuleKind::transition, preset, postset, a},
                [&] { return apply_transition_rule(w, preset, postset, a); });
        }
    }

    // psi'_P: preset/postset are transition sets inside V; the postset
    // must be closed under preset-equality or the new place breaks
    // free-choice.
    auto preset_class_closed = [&](const std::set<NodeId>& postset) {
        for (NodeId t : postset)
            for (NodeId other : w.net.transitions())
                if (other != t && w.net.preset(other) == w.net.preset(t) &&
                    !postset.count(other))
                    return false;
        return true;
    };
    for (const auto& preset : bounded_subsets(v_transitions,
                                              caps.max_linear_set)) {
        for (const auto& postset : bounded_subsets(v_transitions,
                                                   caps.max_linear_set)) {
            if (!caps.allow_self_loops && sets_intersect(preset, postset))
                continue;
            if (!preset_class_closed(postset)) continue;
            try_candidate({RuleKind::extended_place, preset, postset, a},
                          [&] {
                              return apply_extended_place_rule(w, preset,
                                                               postset, a);
                          });
        }
    }

    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) {
                         return keys[x] < keys[y];
                     });
    std::vector<BaseCandidate> sorted;
    for (std::size_t i : order) {
        if (sorted.size() >= caps.max_candidates) break;
        sorted.push_back(std::move(out[i]));
    }
    return sorted;
}

}  // namespace synmine
