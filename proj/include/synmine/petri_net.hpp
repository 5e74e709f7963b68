#pragma once

#include "synmine/event_log.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace synmine {

using NodeId = std::uint32_t;

// Raised when a state cap is hit; distinct from a negative verdict.
struct InconclusiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Labeled Petri net. Places and transitions share one id space but the
// two sets are disjoint; transitions without a label are silent. Nets are
// value types: copies are independent and keep their node ids, and every
// node carries a stable debug name (p1, t3, ...) used by fixtures, PNML
// and DOT output.
class LabeledNet {
public:
    NodeId add_place(std::string name = "");
    NodeId add_transition(std::optional<Activity> label = {},
                          std::string name = "");
    void add_arc(NodeId from, NodeId to);
    void remove_arc(NodeId from, NodeId to);
    void set_label(NodeId transition, std::optional<Activity> label);

    const std::set<NodeId>& places() const { return places_; }
    const std::set<NodeId>& transitions() const { return transitions_; }
    const std::set<std::pair<NodeId, NodeId>>& arcs() const { return arcs_; }

    bool is_place(NodeId n) const { return places_.count(n) != 0; }
    bool is_transition(NodeId n) const { return transitions_.count(n) != 0; }
    bool has_arc(NodeId from, NodeId to) const {
        return arcs_.count({from, to}) != 0;
    }

    const std::set<NodeId>& preset(NodeId n) const;
    const std::set<NodeId>& postset(NodeId n) const;

    std::optional<Activity> label(NodeId transition) const;
    const std::string& name(NodeId n) const;
    void set_name(NodeId n, std::string name);

    // All transitions carrying the given label.
    std::vector<NodeId> transitions_labeled(const Activity& a) const;
    std::set<Activity> label_set() const;

    std::size_t node_count() const {
        return places_.size() + transitions_.size();
    }

private:
    std::set<NodeId> places_;
    std::set<NodeId> transitions_;
    std::set<std::pair<NodeId, NodeId>> arcs_;
    std::map<NodeId, std::set<NodeId>> pre_;
    std::map<NodeId, std::set<NodeId>> post_;
    std::map<NodeId, Activity> labels_;
    std::map<NodeId, std::string> names_;
    NodeId next_id_ = 0;
};

// WF-net roles: dedicated source/sink places and silent start/end
// transitions.
struct WorkflowNet {
    LabeledNet net;
    NodeId source = 0;
    NodeId sink = 0;
    NodeId start = 0;
    NodeId end = 0;
};

// Multiset of marked places.
using Marking = std::map<NodeId, int>;

// Incidence matrix with deterministic (sorted NodeId) row/column order.
struct IncidenceMatrix {
    std::vector<NodeId> place_order;
    std::vector<NodeId> transition_order;
    // entries[row][col] in {-1, 0, 1}
    std::vector<std::vector<int>> entries;

    std::size_t place_index(NodeId p) const;
    std::size_t transition_index(NodeId t) const;
};

// P = {p_s, p1, p_e}, T = {start, end}, both silent, connected in sequence.
WorkflowNet initial_net();

bool is_free_choice(const LabeledNet& net);

// Names the first offending transition pair, if any.
std::optional<std::pair<NodeId, NodeId>> free_choice_violation(
    const LabeledNet& net);

bool is_workflow_net(const LabeledNet& net, NodeId source, NodeId sink,
                     NodeId start, NodeId end);
inline bool is_workflow_net(const WorkflowNet& w) {
    return is_workflow_net(w.net, w.source, w.sink, w.start, w.end);
}

// Structural diagnosis used by the CLI; empty string means well-formed.
std::string workflow_net_diagnosis(const WorkflowNet& w);

// Adds a fresh silent feedback transition consuming from the sink place
// and producing into the source place. Returns the net and the new
// transition's id.
std::pair<LabeledNet, NodeId> short_circuit(const WorkflowNet& w);

IncidenceMatrix incidence(const LabeledNet& net);

// Union over all (s, t) in sources x targets of the nodes lying on at
// least one node-repetition-free path from s to t. Exhaustive simple-path
// search with reach/co-reach pruning; throws InconclusiveError past
// step_cap.
std::set<NodeId> elementary_path_nodes(const LabeledNet& net,
                                       const std::set<NodeId>& sources,
                                       const std::set<NodeId>& targets,
                                       std::uint64_t step_cap = 50'000'000);

std::set<NodeId> enabled(const LabeledNet& net, const Marking& m);
Marking fire(const LabeledNet& net, const Marking& m, NodeId t);

Marking initial_marking(const WorkflowNet& w);
Marking final_marking(const WorkflowNet& w);

// Reachability-based soundness oracle: safeness, option to complete, no
// dead transitions. Throws InconclusiveError if the exploration exceeds
// state_cap markings.
bool is_sound(const WorkflowNet& w, std::size_t state_cap = 100'000);

// The unique maximal siphon contained in `allowed` (iterated removal).
// "Every siphon contains p_s" holds iff the result is empty for
// allowed = P minus {p_s}.
std::set<NodeId> max_siphon_within(const LabeledNet& net,
                                   const std::set<NodeId>& allowed);

// Canonical serialization, identical for nets that differ only by a
// label-preserving, role-preserving renaming of nodes. Used to
// deduplicate candidate nets.
std::string canonical_key(const WorkflowNet& w);

}  // namespace synmine
