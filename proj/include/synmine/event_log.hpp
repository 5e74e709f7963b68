#pragma once

#include "synmine/rational.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace synmine {

// Activity names compare by exact, case-sensitive text equality.
using Activity = std::string;
using Trace = std::vector<Activity>;

// A log is a multiset of traces, stored as variant -> positive count.
// The map ordering (lexicographic on traces) doubles as the tie-break
// order used throughout discovery, so logs are deterministic values.
class EventLog {
public:
    using VariantMap = std::map<Trace, std::int64_t>;

    EventLog() = default;
    explicit EventLog(VariantMap variants);

    void add_trace(const Trace& trace, std::int64_t count = 1);

    const VariantMap& variants() const { return variants_; }
    std::int64_t total_traces() const { return total_traces_; }
    bool empty() const { return variants_.empty(); }

    // Set of all activities occurring in the log.
    std::set<Activity> activities() const;

    bool operator==(const EventLog&) const = default;

private:
    VariantMap variants_;
    std::int64_t total_traces_ = 0;
};

// Trace and multiset projection: each trace restricted to `keep`,
// equal results merge counts, empty results are kept as the empty trace.
Trace project(const Trace& trace, const std::set<Activity>& keep);
EventLog project(const EventLog& log, const std::set<Activity>& keep);

// Occurrences of `a` in the log, weighted by variant multiplicity.
std::int64_t count_activity(const Activity& a, const EventLog& log);

// Number of direct successions a,b (adjacent pairs), weighted.
std::int64_t count_directly_follows(const Activity& a, const Activity& b,
                                    const EventLog& log);

// Strength of the causal relation (a,b), in (-1,1]:
//   a != b: (#(a,b) - #(b,a)) / (#(a,b) + #(b,a) + 1)
//   a == b: #(a,a) / (#(a,a) + 1)
Rat causality(const Activity& a, const Activity& b, const EventLog& log);

// Activities whose causal strength towards / from `a` is at least `c`.
std::set<Activity> preceding_set(const Activity& a, const EventLog& log,
                                 const Rat& c);
std::set<Activity> following_set(const Activity& a, const EventLog& log,
                                 const Rat& c);

// First / last elements of the non-empty traces.
std::set<Activity> start_activities(const EventLog& log);
std::set<Activity> end_activities(const EventLog& log);

// Keeps the most frequent variants until at least `coverage` of the cases
// are covered; ties by lexicographic trace order. coverage = 1 keeps all.
EventLog filter_variant_coverage(const EventLog& log, const Rat& coverage);

}  // namespace synmine
