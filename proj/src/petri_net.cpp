#include "synmine/petri_net.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace synmine {

namespace {
const std::set<NodeId> kEmptySet;
}

NodeId LabeledNet::add_place(std::string name) {
    NodeId id = next_id_++;
    places_.insert(id);
    names_[id] = name.empty() ? "p" + std::to_string(id) : std::move(name);
    return id;
}

NodeId LabeledNet::add_transition(std::optional<Activity> label,
                                  std::string name) {
    NodeId id = next_id_++;
    transitions_.insert(id);
    if (label) labels_[id] = *label;
    names_[id] = name.empty() ? "t" + std::to_string(id) : std::move(name);
    return id;
}

void LabeledNet::add_arc(NodeId from, NodeId to) {
    bool pt = is_place(from) && is_transition(to);
    bool tp = is_transition(from) && is_place(to);
    if (!pt && !tp)
        throw StructureError("arc must connect a place and a transition");
    arcs_.insert({from, to});
    post_[from].insert(to);
    pre_[to].insert(from);
}

void LabeledNet::remove_arc(NodeId from, NodeId to) {
    if (!arcs_.erase({from, to}))
        throw StructureError("arc not present");
    post_[from].erase(to);
    pre_[to].erase(from);
}

void LabeledNet::set_label(NodeId transition, std::optional<Activity> label) {
    if (!is_transition(transition))
        throw StructureError("label target is not a transition");
    if (label) labels_[transition] = *label;
    else labels_.erase(transition);
}

const std::set<NodeId>& LabeledNet::preset(NodeId n) const {
    auto it = pre_.find(n);
    return it == pre_.end() ? kEmptySet : it->second;
}

const std::set<NodeId>& LabeledNet::postset(NodeId n) const {
    auto it = post_.find(n);
    return it == post_.end() ? kEmptySet : it->second;
}

std::optional<Activity> LabeledNet::label(NodeId transition) const {
    auto it = labels_.find(transition);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
}

const std::string& LabeledNet::name(NodeId n) const {
    return names_.at(n);
}

void LabeledNet::set_name(NodeId n, std::string name) {
    names_.at(n) = std::move(name);
}

std::vector<NodeId> LabeledNet::transitions_labeled(const Activity& a) const {
    std::vector<NodeId> result;
    for (const auto& [t, label] : labels_)
        if (label == a) result.push_back(t);
    return result;
}

std::set<Activity> LabeledNet::label_set() const {
    std::set<Activity> result;
    for (const auto& [t, label] : labels_) result.insert(label);
    return result;
}

std::size_t IncidenceMatrix::place_index(NodeId p) const {
    auto it = std::lower_bound(place_order.begin(), place_order.end(), p);
    if (it == place_order.end() || *it != p)
        throw StructureError("place not in incidence matrix");
    return it - place_order.begin();
}

std::size_t IncidenceMatrix::transition_index(NodeId t) const {
    auto it =
        std::lower_bound(transition_order.begin(), transition_order.end(), t);
    if (it == transition_order.end() || *it != t)
        throw StructureError("transition not in incidence matrix");
    return it - transition_order.begin();
}

WorkflowNet initial_net() {
    WorkflowNet w;
    w.source = w.net.add_place("ps");
    NodeId p1 = w.net.add_place("p1");
    w.sink = w.net.add_place("pe");
    w.start = w.net.add_transition({}, "start");
    w.end = w.net.add_transition({}, "end");
    w.net.add_arc(w.source, w.start);
    w.net.add_arc(w.start, p1);
    w.net.add_arc(p1, w.end);
    w.net.add_arc(w.end, w.sink);
    return w;
}

std::optional<std::pair<NodeId, NodeId>> free_choice_violation(
    const LabeledNet& net) {
    const auto& transitions = net.transitions();
    for (auto it1 = transitions.begin(); it1 != transitions.end(); ++it1) {
        for (auto it2 = std::next(it1); it2 != transitions.end(); ++it2) {
            const auto& pre1 = net.preset(*it1);
            const auto& pre2 = net.preset(*it2);
            if (pre1 == pre2) continue;
            bool disjoint =
                std::none_of(pre1.begin(), pre1.end(), [&](NodeId p) {
                    return pre2.count(p) != 0;
                });
            if (!disjoint) return std::make_pair(*it1, *it2);
        }
    }
    return std::nullopt;
}

bool is_free_choice(const LabeledNet& net) {
    return !free_choice_violation(net).has_value();
}

namespace {

std::set<NodeId> closure(const LabeledNet& net, const std::set<NodeId>& seeds,
                         bool forward) {
    std::set<NodeId> seen = seeds;
    std::deque<NodeId> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
        NodeId n = queue.front();
        queue.pop_front();
        for (NodeId next : forward ? net.postset(n) : net.preset(n))
            if (seen.insert(next).second) queue.push_back(next);
    }
    return seen;
}

}  // namespace

std::string workflow_net_diagnosis(const WorkflowNet& w) {
    const LabeledNet& net = w.net;
    if (!net.is_place(w.source) || !net.is_place(w.sink))
        return "source/sink roles must be places";
    if (!net.is_transition(w.start) || !net.is_transition(w.end))
        return "start/end roles must be transitions";
    if (!net.preset(w.source).empty())
        return "source place has incoming arcs";
    if (!net.postset(w.sink).empty())
        return "sink place has outgoing arcs";
    if (net.preset(w.start) != std::set<NodeId>{w.source})
        return "start transition must consume exactly the source place";
    if (net.postset(w.source) != std::set<NodeId>{w.start})
        return "source place must feed exactly the start transition";
    if (net.postset(w.end) != std::set<NodeId>{w.sink})
        return "end transition must produce exactly the sink place";
    if (net.preset(w.sink) != std::set<NodeId>{w.end})
        return "sink place must be fed exactly by the end transition";
    if (net.label(w.start) || net.label(w.end))
        return "start/end transitions must be silent";
    auto from_source = closure(net, {w.source}, true);
    auto to_sink = closure(net, {w.sink}, false);
    for (NodeId p : net.places())
        if (!from_source.count(p) || !to_sink.count(p))
            return "place " + net.name(p) + " is not on a source-sink path";
    for (NodeId t : net.transitions())
        if (!from_source.count(t) || !to_sink.count(t))
            return "transition " + net.name(t) +
                   " is not on a source-sink path";
    return "";
}

bool is_workflow_net(const LabeledNet& net, NodeId source, NodeId sink,
                     NodeId start, NodeId end) {
    WorkflowNet w{net, source, sink, start, end};
    return workflow_net_diagnosis(w).empty();
}

std::pair<LabeledNet, NodeId> short_circuit(const WorkflowNet& w) {
    LabeledNet sc = w.net;
    NodeId feedback = sc.add_transition({}, "t'");
    sc.add_arc(w.sink, feedback);
    sc.add_arc(feedback, w.source);
    return {std::move(sc), feedback};
}

IncidenceMatrix incidence(const LabeledNet& net) {
    IncidenceMatrix m;
    m.place_order.assign(net.places().begin(), net.places().end());
    m.transition_order.assign(net.transitions().begin(),
                              net.transitions().end());
    m.entries.assign(m.place_order.size(),
                     std::vector<int>(m.transition_order.size(), 0));
    for (std::size_t r = 0; r < m.place_order.size(); ++r) {
        NodeId p = m.place_order[r];
        for (std::size_t c = 0; c < m.transition_order.size(); ++c) {
            NodeId t = m.transition_order[c];
            bool consumes = net.has_arc(p, t);
            bool produces = net.has_arc(t, p);
            if (consumes == produces) m.entries[r][c] = 0;
            else m.entries[r][c] = consumes ? -1 : 1;
        }
    }
    return m;
}

std::set<NodeId> elementary_path_nodes(const LabeledNet& net,
                                       const std::set<NodeId>& sources,
                                       const std::set<NodeId>& targets,
                                       std::uint64_t step_cap) {
    std::set<NodeId> result;
    std::uint64_t steps = 0;
    for (NodeId s : sources) {
        for (NodeId t : targets) {
            if (s == t) {
                result.insert(s);
                continue;
            }
            auto coreach = closure(net, {t}, false);
            if (!coreach.count(s)) continue;
            auto reach = closure(net, {s}, true);
            std::set<NodeId> candidates;
            for (NodeId n : reach)
                if (coreach.count(n)) candidates.insert(n);
            std::set<NodeId> confirmed;
            std::vector<NodeId> path;
            std::set<NodeId> on_path;
            std::function<void(NodeId)> dfs = [&](NodeId v) {
                if (confirmed.size() == candidates.size()) return;
                if (++steps > step_cap)
                    throw InconclusiveError(
                        "elementary-path search exceeded step cap");
                path.push_back(v);
                on_path.insert(v);
                if (v == t) {
                    confirmed.insert(path.begin(), path.end());
                } else {
                    for (NodeId next : net.postset(v))
                        if (!on_path.count(next) && candidates.count(next))
                            dfs(next);
                }
                on_path.erase(v);
                path.pop_back();
            };
            dfs(s);
            result.insert(confirmed.begin(), confirmed.end());
        }
    }
    return result;
}

std::set<NodeId> enabled(const LabeledNet& net, const Marking& m) {
    std::set<NodeId> result;
    for (NodeId t : net.transitions()) {
        bool ok = true;
        for (NodeId p : net.preset(t)) {
            auto it = m.find(p);
            if (it == m.end() || it->second < 1) {
                ok = false;
                break;
            }
        }
        if (ok) result.insert(t);
    }
    return result;
}

Marking fire(const LabeledNet& net, const Marking& m, NodeId t) {
    for (NodeId p : net.preset(t)) {
        auto it = m.find(p);
        if (it == m.end() || it->second < 1)
            throw StructureError("transition " + net.name(t) +
                                 " is not enabled");
    }
    Marking next = m;
    for (NodeId p : net.preset(t)) {
        if (--next[p] == 0) next.erase(p);
    }
    for (NodeId p : net.postset(t)) ++next[p];
    return next;
}

Marking initial_marking(const WorkflowNet& w) { return {{w.source, 1}}; }
Marking final_marking(const WorkflowNet& w) { return {{w.sink, 1}}; }

bool is_sound(const WorkflowNet& w, std::size_t state_cap) {
    const LabeledNet& net = w.net;
    Marking initial = initial_marking(w);
    Marking final = final_marking(w);

    std::map<Marking, std::size_t> index;
    std::vector<Marking> markings;
    std::vector<std::vector<std::size_t>> successors;
    std::set<NodeId> fired;

    auto intern = [&](const Marking& m) {
        auto [it, inserted] = index.emplace(m, markings.size());
        if (inserted) {
            if (markings.size() >= state_cap)
                throw InconclusiveError(
                    "soundness exploration exceeded state cap");
            markings.push_back(m);
            successors.emplace_back();
        }
        return it->second;
    };

    intern(initial);
    for (std::size_t i = 0; i < markings.size(); ++i) {
        Marking m = markings[i];
        for (NodeId t : enabled(net, m)) {
            Marking next = fire(net, m, t);
            for (const auto& [p, tokens] : next)
                if (tokens > 1) return false;  // safeness
            fired.insert(t);
            std::size_t j = intern(next);  // may grow `successors`
            successors[i].push_back(j);
        }
    }

    // No dead transitions.
    for (NodeId t : net.transitions())
        if (!fired.count(t)) return false;

    // Option to complete: every reachable marking co-reaches [pe].
    auto final_it = index.find(final);
    if (final_it == index.end()) return false;
    std::vector<std::vector<std::size_t>> predecessors(markings.size());
    for (std::size_t i = 0; i < markings.size(); ++i)
        for (std::size_t j : successors[i]) predecessors[j].push_back(i);
    std::vector<bool> completes(markings.size(), false);
    std::deque<std::size_t> queue{final_it->second};
    completes[final_it->second] = true;
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        for (std::size_t j : predecessors[i])
            if (!completes[j]) {
                completes[j] = true;
                queue.push_back(j);
            }
    }
    return std::all_of(completes.begin(), completes.end(),
                       [](bool b) { return b; });
}

std::set<NodeId> max_siphon_within(const LabeledNet& net,
                                   const std::set<NodeId>& allowed) {
    std::set<NodeId> siphon;
    for (NodeId p : allowed)
        if (net.is_place(p)) siphon.insert(p);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = siphon.begin(); it != siphon.end();) {
            NodeId p = *it;
            bool violates = false;
            for (NodeId t : net.preset(p)) {
                // t produces into the siphon, so t must also consume
                // from it.
                bool feeds_from_siphon = std::any_of(
                    net.preset(t).begin(), net.preset(t).end(),
                    [&](NodeId q) { return siphon.count(q) != 0; });
                if (!feeds_from_siphon) {
                    violates = true;
                    break;
                }
            }
            if (violates) {
                it = siphon.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    return siphon;
}

namespace {

// Color-refinement canonicalization with individualization on ties.
struct Canonicalizer {
    const WorkflowNet& w;
    std::vector<NodeId> nodes;
    std::map<NodeId, std::size_t> node_index;

    explicit Canonicalizer(const WorkflowNet& w_) : w(w_) {
        for (NodeId p : w.net.places()) nodes.push_back(p);
        for (NodeId t : w.net.transitions()) nodes.push_back(t);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            node_index[nodes[i]] = i;
    }

    std::string base_color(NodeId n) const {
        if (w.net.is_place(n)) {
            if (n == w.source) return "P:source";
            if (n == w.sink) return "P:sink";
            return "P";
        }
        if (n == w.start) return "T:start";
        if (n == w.end) return "T:end";
        auto label = w.net.label(n);
        return label ? "T:" + *label : "T:tau";
    }

    std::vector<int> refine(std::vector<std::string> colors) const {
        std::vector<int> ids(nodes.size());
        while (true) {
            std::map<std::string, int> palette;
            for (const auto& c : colors) palette.emplace(c, 0);
            int next = 0;
            for (auto& [c, id] : palette) id = next++;
            for (std::size_t i = 0; i < nodes.size(); ++i)
                ids[i] = palette[colors[i]];
            std::vector<std::string> refined(nodes.size());
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                std::vector<int> in, out;
                for (NodeId n : w.net.preset(nodes[i]))
                    in.push_back(ids[node_index.at(n)]);
                for (NodeId n : w.net.postset(nodes[i]))
                    out.push_back(ids[node_index.at(n)]);
                std::sort(in.begin(), in.end());
                std::sort(out.begin(), out.end());
                std::ostringstream os;
                os << ids[i] << "|i";
                for (int c : in) os << ',' << c;
                os << "|o";
                for (int c : out) os << ',' << c;
                refined[i] = os.str();
            }
            std::set<std::string> distinct(refined.begin(), refined.end());
            std::set<int> old_distinct(ids.begin(), ids.end());
            if (distinct.size() == old_distinct.size()) return ids;
            colors = std::move(refined);
        }
    }

    std::string serialize(const std::vector<std::size_t>& order) const {
        std::vector<std::size_t> position(nodes.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            position[order[i]] = i;
        std::ostringstream os;
        for (std::size_t idx : order) os << base_color(nodes[idx]) << ';';
        std::vector<std::pair<std::size_t, std::size_t>> arcs;
        for (const auto& [from, to] : w.net.arcs())
            arcs.emplace_back(position[node_index.at(from)],
                              position[node_index.at(to)]);
        std::sort(arcs.begin(), arcs.end());
        os << '#';
        for (const auto& [a, b] : arcs) os << a << '>' << b << ';';
        return os.str();
    }

    std::string canonical(std::vector<std::string> colors, int depth) {
        std::vector<int> ids = refine(std::move(colors));
        // Group nodes by refined color.
        std::map<int, std::vector<std::size_t>> classes;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            classes[ids[i]].push_back(i);
        auto tie_class = std::find_if(
            classes.begin(), classes.end(),
            [](const auto& kv) { return kv.second.size() > 1; });
        if (tie_class == classes.end()) {
            std::vector<std::size_t> order;
            for (const auto& [color, members] : classes)
                order.push_back(members.front());
            return serialize(order);
        }
        // Individualize each member of the first tied class; minimum
        // serialization wins. Depth-capped: beyond the cap the first
        // branch decides, which keeps the key deterministic.
        std::string best;
        std::size_t branches =
            depth > 6 ? 1 : tie_class->second.size();
        for (std::size_t k = 0; k < branches; ++k) {
            std::vector<std::string> branch_colors(nodes.size());
            for (std::size_t i = 0; i < nodes.size(); ++i)
                branch_colors[i] = std::to_string(ids[i]);
            branch_colors[tie_class->second[k]] += "*";
            std::string candidate = canonical(std::move(branch_colors),
                                              depth + 1);
            if (best.empty() || candidate < best) best = candidate;
        }
        return best;
    }

    std::string run() {
        std::vector<std::string> colors(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            colors[i] = base_color(nodes[i]);
        return canonical(std::move(colors), 0);
    }
};

}  // namespace

std::string canonical_key(const WorkflowNet& w) {
    return Canonicalizer(w).run();
}

}  // namespace synmine
