#pragma once

#include "synmine/event_log.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace synmine {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// XES reader. Takes each event's concept:name; events without one are
// skipped. If lifecycle:transition is present, only "complete" events
// (case-insensitive) are kept.
EventLog parse_xes(std::istream& source);

// CSV reader. Rows are grouped by `case_column`; within a case they are
// ordered by `order_column` (numeric if every value is numeric, else
// lexicographic, so ISO-8601 timestamps sort correctly) or kept in file
// order when no order column is given.
EventLog parse_csv(std::istream& source, const std::string& case_column,
                   const std::string& activity_column,
                   const std::optional<std::string>& order_column = {});

// Serializes a log as case,activity,index rows; parse_csv on the output
// reproduces the log exactly.
void write_csv(std::ostream& out, const EventLog& log);

}  // namespace synmine
