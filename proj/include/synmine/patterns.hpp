#pragma once

#include "synmine/conformance.hpp"
#include "synmine/petri_net.hpp"
#include "synmine/synthesis.hpp"

#include <optional>
#include <string>
#include <vector>

namespace synmine {

enum class PatternTag { none, skip, loop_strict, loop_tau, skip_loop };

std::string to_string(PatternTag tag);

// One candidate for an iteration: the net, how it was built, and its
// scores once evaluated.
struct CandidateNet {
    WorkflowNet net;
    RuleApplication base_rule;
    PatternTag pattern = PatternTag::none;
    std::optional<Score> scores;
};

// Adds a silent transition parallel to the unique a-labeled transition,
// making it skippable. Throws StructureError if no or multiple
// transitions carry the label.
WorkflowNet skip(const WorkflowNet& w, const Activity& a);

// Puts the unique a-labeled transition in a strict loop: a silent
// back-transition from its postset to its preset, rerouting the postset
// through a fresh place/transition pair first when a shared join would
// break free-choice.
WorkflowNet loop_strict(const WorkflowNet& w, const Activity& a);

// Same skeleton as loop_strict, but the back-transition carries the
// label and the forward transition becomes silent, making the loop
// optional.
WorkflowNet loop_tau(const WorkflowNet& w, const Activity& a);

// Base candidates plus skip / loop_strict / loop_tau / skip-then-loop
// applied to each of them, deduplicated canonically. Pattern
// applications that fail structurally are dropped.
std::vector<CandidateNet> candidate_set(const WorkflowNet& w,
                                        const std::set<NodeId>& V,
                                        const Activity& a,
                                        const EnumerationCaps& caps);

}  // namespace synmine
