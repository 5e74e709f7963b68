#include "synmine/event_log.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace synmine {

EventLog::EventLog(VariantMap variants) : variants_(std::move(variants)) {
    for (const auto& [trace, count] : variants_) {
        if (count <= 0)
            throw std::invalid_argument("variant count must be positive");
        total_traces_ += count;
    }
}

void EventLog::add_trace(const Trace& trace, std::int64_t count) {
    if (count <= 0)
        throw std::invalid_argument("variant count must be positive");
    variants_[trace] += count;
    total_traces_ += count;
}

std::set<Activity> EventLog::activities() const {
    std::set<Activity> result;
    for (const auto& [trace, count] : variants_)
        result.insert(trace.begin(), trace.end());
    return result;
}

Trace project(const Trace& trace, const std::set<Activity>& keep) {
    Trace out;
    for (const auto& a : trace)
        if (keep.count(a)) out.push_back(a);
    return out;
}

EventLog project(const EventLog& log, const std::set<Activity>& keep) {
    EventLog out;
    for (const auto& [trace, count] : log.variants())
        out.add_trace(project(trace, keep), count);
    return out;
}

std::int64_t count_activity(const Activity& a, const EventLog& log) {
    std::int64_t total = 0;
    for (const auto& [trace, count] : log.variants()) {
        std::int64_t per_trace =
            std::count(trace.begin(), trace.end(), a);
        total += per_trace * count;
    }
    return total;
}

std::int64_t count_directly_follows(const Activity& a, const Activity& b,
                                    const EventLog& log) {
    std::int64_t total = 0;
    for (const auto& [trace, count] : log.variants()) {
        std::int64_t per_trace = 0;
        for (std::size_t i = 0; i + 1 < trace.size(); ++i)
            if (trace[i] == a && trace[i + 1] == b) ++per_trace;
        total += per_trace * count;
    }
    return total;
}

Rat causality(const Activity& a, const Activity& b, const EventLog& log) {
    std::int64_t ab = count_directly_follows(a, b, log);
    if (a == b) return Rat(ab, ab + 1);
    std::int64_t ba = count_directly_follows(b, a, log);
    return Rat(ab - ba, ab + ba + 1);
}

std::set<Activity> preceding_set(const Activity& a, const EventLog& log,
                                 const Rat& c) {
    std::set<Activity> result;
    for (const auto& pre : log.activities())
        if (causality(pre, a, log) >= c) result.insert(pre);
    return result;
}

std::set<Activity> following_set(const Activity& a, const EventLog& log,
                                 const Rat& c) {
    std::set<Activity> result;
    for (const auto& fol : log.activities())
        if (causality(a, fol, log) >= c) result.insert(fol);
    return result;
}

std::set<Activity> start_activities(const EventLog& log) {
    std::set<Activity> result;
    for (const auto& [trace, count] : log.variants())
        if (!trace.empty()) result.insert(trace.front());
    return result;
}

std::set<Activity> end_activities(const EventLog& log) {
    std::set<Activity> result;
    for (const auto& [trace, count] : log.variants())
        if (!trace.empty()) result.insert(trace.back());
    return result;
}

EventLog filter_variant_coverage(const EventLog& log, const Rat& coverage) {
    if (coverage >= 1) return log;
    // Most frequent variants first; ties by lexicographic trace order,
    // which the map iteration already provides.
    std::vector<const EventLog::VariantMap::value_type*> ordered;
    for (const auto& entry : log.variants()) ordered.push_back(&entry);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto* a, const auto* b) {
                         return a->second > b->second;
                     });
    EventLog out;
    std::int64_t covered = 0;
    for (const auto* entry : ordered) {
        if (Rat(covered, log.total_traces()) >= coverage) break;
        out.add_trace(entry->first, entry->second);
        covered += entry->second;
    }
    return out;
}

}  // namespace synmine
