#pragma once

#include "synmine/discovery.hpp"
#include "synmine/event_log.hpp"
#include "synmine/patterns.hpp"
#include "synmine/petri_net.hpp"
#include "synmine/synthesis.hpp"

#include <vector>

namespace synmine::fixtures {

// The running-example log: 13 variants, 100 traces.
inline EventLog log_ls() {
    EventLog log;
    auto add = [&](std::vector<Activity> trace, std::int64_t count) {
        log.add_trace(trace, count);
    };
    add({"a", "b", "c", "d", "f", "g", "h"}, 22);
    add({"a", "b", "c", "f", "d", "g", "h"}, 14);
    add({"a", "e", "b", "c", "d", "f", "g", "h"}, 13);
    add({"a", "e", "b", "c", "f", "d", "g", "h"}, 13);
    add({"a", "e", "b", "c", "f", "g", "d", "h"}, 10);
    add({"a", "b", "c", "f", "g", "d", "h"}, 10);
    add({"a", "b", "e", "c", "d", "f", "g", "h"}, 6);
    add({"a", "b", "e", "c", "f", "g", "d", "h"}, 3);
    add({"a", "b", "e", "c", "f", "d", "g", "h"}, 3);
    add({"a", "b", "c", "d", "e", "f", "g", "h"}, 2);
    add({"a", "b", "c", "e", "d", "f", "g", "h"}, 2);
    add({"a", "b", "c", "e", "f", "g", "d", "h"}, 1);
    add({"a", "b", "c", "e", "f", "d", "g", "h"}, 1);
    return log;
}

// log_ls projected onto {h, g, d}.
inline EventLog log_l3s() {
    EventLog log;
    log.add_trace({"d", "g", "h"}, 76);
    log.add_trace({"g", "d", "h"}, 24);
    return log;
}

// Nets along the running example's first iterations. Node handles are
// kept so tests can refer to them by the walkthrough names.
struct ChainNets {
    WorkflowNet after_h;   // abstraction adds p2, t1 (labeled h)
    WorkflowNet after_g;   // abstraction adds p3, t2 (labeled g)
    NodeId p1, p2, p3, t1, t2;
};

inline ChainNets chain_nets() {
    ChainNets result;
    WorkflowNet initial = initial_net();
    NodeId p1 = *initial.net.postset(initial.start).begin();
    RuleResult step1 =
        apply_abstraction(initial, {initial.start}, {p1}, Activity("h"));
    result.after_h = step1.net;
    result.p1 = p1;
    result.p2 = *step1.new_place;
    result.t1 = *step1.new_transition;
    RuleResult step2 = apply_abstraction(result.after_h,
                                         {result.after_h.start},
                                         {result.p2}, Activity("g"));
    result.after_g = step2.net;
    result.p3 = *step2.new_place;
    result.t2 = *step2.new_transition;
    return result;
}

// The walkthrough net with a d-labeled transition on a parallel branch:
// extended place rule between start and t1 on the two-activity chain.
struct BranchNet {
    WorkflowNet net;
    NodeId t_d;
};

inline BranchNet branch_net() {
    ChainNets chain = chain_nets();
    RuleResult result = apply_extended_place_rule(
        chain.after_g, {chain.after_g.start}, {chain.t1}, Activity("d"));
    return {result.net, *result.new_transition};
}

// A sound free-choice WF-net whose language contains every variant of
// log_ls: a, then b->c with e optional in parallel, then f->g with d in
// parallel, then h.
inline WorkflowNet full_model_net() {
    WorkflowNet w;
    LabeledNet& net = w.net;
    w.source = net.add_place("ps");
    NodeId p0 = net.add_place("p0");
    NodeId pb = net.add_place("pb");
    NodeId pc = net.add_place("pc");
    NodeId pe1 = net.add_place("pe1");
    NodeId pe2 = net.add_place("pe2");
    NodeId pd = net.add_place("pd");
    NodeId pf = net.add_place("pf");
    NodeId pg = net.add_place("pg");
    NodeId ph1 = net.add_place("ph1");
    NodeId ph2 = net.add_place("ph2");
    NodeId plast = net.add_place("plast");
    w.sink = net.add_place("pe");

    w.start = net.add_transition({}, "top");
    w.end = net.add_transition({}, "bottom");
    NodeId ta = net.add_transition(Activity("a"), "ta");
    NodeId tb = net.add_transition(Activity("b"), "tb");
    NodeId tc = net.add_transition(Activity("c"), "tc");
    NodeId td = net.add_transition(Activity("d"), "td");
    NodeId te = net.add_transition(Activity("e"), "te");
    NodeId te_skip = net.add_transition({}, "te_skip");
    NodeId tf = net.add_transition(Activity("f"), "tf");
    NodeId tg = net.add_transition(Activity("g"), "tg");
    NodeId th = net.add_transition(Activity("h"), "th");

    net.add_arc(w.source, w.start);
    net.add_arc(w.start, p0);
    net.add_arc(p0, ta);
    net.add_arc(ta, pb);
    net.add_arc(ta, pe1);
    net.add_arc(pb, tb);
    net.add_arc(tb, pc);
    net.add_arc(pc, tc);
    net.add_arc(tc, pd);
    net.add_arc(tc, pf);
    net.add_arc(pe1, te);
    net.add_arc(pe1, te_skip);
    net.add_arc(te, pe2);
    net.add_arc(te_skip, pe2);
    net.add_arc(pd, td);
    net.add_arc(td, ph2);
    net.add_arc(pf, tf);
    net.add_arc(pe2, tf);
    net.add_arc(tf, pg);
    net.add_arc(pg, tg);
    net.add_arc(tg, ph1);
    net.add_arc(ph1, th);
    net.add_arc(ph2, th);
    net.add_arc(th, plast);
    net.add_arc(plast, w.end);
    net.add_arc(w.end, w.sink);
    return w;
}

}  // namespace synmine::fixtures
