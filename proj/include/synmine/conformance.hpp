#pragma once

#include "synmine/event_log.hpp"
#include "synmine/petri_net.hpp"
#include "synmine/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace synmine {

enum class MoveKind {
    synchronous,
    model_move_silent,
    model_move_visible,
    log_move,
};

struct Move {
    MoveKind kind = MoveKind::synchronous;
    std::optional<Activity> log_activity;   // synchronous and log moves
    std::optional<NodeId> transition;       // synchronous and model moves
};

struct Alignment {
    std::vector<Move> moves;
    std::int64_t cost = 0;
};

struct Score {
    Rat fitness;
    Rat precision;
    Rat f1;
};

// Minimal-cost alignment of `trace` against the net, with costs:
// synchronous 0, silent model move 0, visible model move 1, log move 1.
// Uniform-cost search over the synchronous product; deterministic
// tie-breaking. Throws InconclusiveError past state_cap.
Alignment optimal_alignment(const WorkflowNet& w, const Trace& trace,
                            std::size_t state_cap = 100'000);

// Cheapest visible-move cost of any source-to-sink path; the
// empty-trace alignment cost.
std::int64_t empty_trace_model_cost(const WorkflowNet& w,
                                    std::size_t state_cap = 100'000);

// Multiplicity-weighted mean of per-trace alignment fitness
// 1 - cost / (|trace| + empty-trace model cost); 0/0 counts as 1.
Rat fitness(const WorkflowNet& w, const EventLog& log,
            std::size_t state_cap = 100'000);

// Escaping-edges precision over the aligned model-move replays.
Rat precision(const WorkflowNet& w, const EventLog& log,
              std::size_t state_cap = 100'000);

// Harmonic mean; 0 when both inputs are 0.
Rat f1(const Rat& fitness, const Rat& precision);

Score score(const WorkflowNet& w, const EventLog& log,
            std::size_t state_cap = 100'000);

}  // namespace synmine
