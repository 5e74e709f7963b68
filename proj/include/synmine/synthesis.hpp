#pragma once

#include "synmine/petri_net.hpp"
#include "synmine/rational.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace synmine {

enum class RuleKind {
    abstraction,
    dual_abstraction,
    place,
    transition,
    extended_place,
};

std::string to_string(RuleKind kind);

// One synthesis-rule instance. For abstraction: first = R (transitions),
// second = S (places). For dual abstraction: first = S (places),
// second = R (transitions). For the place/transition rules: first and
// second are the new node's preset and postset.
struct RuleApplication {
    RuleKind kind = RuleKind::abstraction;
    std::set<NodeId> first;
    std::set<NodeId> second;
    std::optional<Activity> label;
};

struct EnumerationCaps {
    std::size_t max_abstraction_set = 4;  // |R|, |S| for psi_A / psi_D
    std::size_t max_linear_set = 3;       // preset/postset for psi_T, psi'_P
    std::size_t max_candidates = 5000;
    bool allow_self_loops = false;
};

using RatVec = std::vector<Rat>;

// True iff `target` lies in the span of `vectors` (exact rational
// Gaussian elimination; no tolerances).
bool in_span(const std::vector<RatVec>& vectors, const RatVec& target);

// Row/column membership checks against a short-circuited net's incidence
// matrix. `new_row` is indexed by the matrix's transition order,
// `new_column` by its place order.
bool is_linearly_dependent_place(const IncidenceMatrix& m,
                                 const RatVec& new_row);
bool is_linearly_dependent_transition(const IncidenceMatrix& m,
                                      const RatVec& new_column);

struct RuleResult {
    WorkflowNet net;
    std::optional<NodeId> new_place;
    std::optional<NodeId> new_transition;
};

// psi_A: reroutes the fully connected arcs R x S through a fresh
// place/transition pair; the new transition carries `label` (or stays
// silent). Throws StructureError if preconditions or the resulting
// structural checks fail.
RuleResult apply_abstraction(const WorkflowNet& w, const std::set<NodeId>& R,
                             const std::set<NodeId>& S,
                             const std::optional<Activity>& label = {});

// psi_D: the dual construction for fully connected S x R. Only the two
// free-choice-preserving cases are accepted: S equals the combined
// preset of R, or R equals the combined postset of S, in the host net.
RuleResult apply_dual_abstraction(const WorkflowNet& w,
                                  const std::set<NodeId>& S,
                                  const std::set<NodeId>& R,
                                  const std::optional<Activity>& label = {});

// psi_P: adds a place whose row is linearly dependent in the
// short-circuited result and whose addition keeps every siphon touching
// the source place.
RuleResult apply_place_rule(const WorkflowNet& w,
                            const std::set<NodeId>& preset,
                            const std::set<NodeId>& postset);

// psi_T: adds a transition whose column is linearly dependent in the
// short-circuited result.
RuleResult apply_transition_rule(const WorkflowNet& w,
                                 const std::set<NodeId>& preset,
                                 const std::set<NodeId>& postset,
                                 const std::optional<Activity>& label = {});

// psi'_P: psi_P followed directly by psi_A between the new place and its
// preset; the transition introduced by the abstraction step carries
// `label`.
RuleResult apply_extended_place_rule(const WorkflowNet& w,
                                     const std::set<NodeId>& preset,
                                     const std::set<NodeId>& postset,
                                     const Activity& label);

struct BaseCandidate {
    WorkflowNet net;
    RuleApplication rule;
};

// Every feasible single application of psi_A, psi'_P, psi_T, psi_D that
// introduces a transition labeled `a` and touches only nodes of V.
// Deduplicated by canonical form, deterministically ordered and bounded
// by the caps.
std::vector<BaseCandidate> enumerate_applications(const WorkflowNet& w,
                                                  const std::set<NodeId>& V,
                                                  const Activity& a,
                                                  const EnumerationCaps& caps);

}  // namespace synmine
