#include "synmine/log_io.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace synmine {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

void collect_traces(const boost::property_tree::ptree& node, EventLog& log) {
    for (const auto& [name, child] : node) {
        if (name == "trace") {
            Trace trace;
            for (const auto& [ename, event] : child) {
                if (ename != "event") continue;
                std::optional<std::string> concept_name;
                std::optional<std::string> lifecycle;
                for (const auto& [aname, attr] : event) {
                    if (aname != "string") continue;
                    auto key = attr.get_optional<std::string>("<xmlattr>.key");
                    auto value = attr.get_optional<std::string>("<xmlattr>.value");
                    if (!key || !value) continue;
                    if (*key == "concept:name") concept_name = *value;
                    else if (*key == "lifecycle:transition") lifecycle = *value;
                }
                if (!concept_name) continue;
                if (lifecycle && lower(*lifecycle) != "complete") continue;
                trace.push_back(*concept_name);
            }
            log.add_trace(trace);
        } else {
            collect_traces(child, log);
        }
    }
}

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line_number = 0;
};

// Minimal CSV: comma separated, double quotes with "" escapes, CRLF tolerant.
std::vector<CsvRow> read_csv_rows(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && rows.empty()) continue;
        CsvRow row;
        row.line_number = line_number;
        std::string field;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    field += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.fields.push_back(std::move(field));
                field.clear();
            } else {
                field += c;
            }
        }
        row.fields.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

bool is_numeric(const std::string& s) {
    if (s.empty()) return false;
    double value;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EventLog parse_xes(std::istream& source) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_xml(source, tree);
    } catch (const boost::property_tree::xml_parser_error& e) {
        throw ParseError("XES parse error at line " +
                         std::to_string(e.line()) + ": " + e.message());
    }
    if (tree.empty()) throw ParseError("XES parse error: empty document");
    EventLog log;
    collect_traces(tree, log);
    return log;
}

EventLog parse_csv(std::istream& source, const std::string& case_column,
                   const std::string& activity_column,
                   const std::optional<std::string>& order_column) {
    auto rows = read_csv_rows(source);
    if (rows.empty()) throw ParseError("CSV parse error: empty document");

    const auto& header = rows.front().fields;
    auto find_column = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw ParseError("CSV parse error: missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t case_idx = find_column(case_column);
    std::size_t activity_idx = find_column(activity_column);
    std::optional<std::size_t> order_idx;
    if (order_column) order_idx = find_column(*order_column);

    struct Entry {
        std::string order_value;
        std::string activity;
        std::size_t file_order;
    };
    // Cases keep file order of first appearance; irrelevant for the
    // multiset but keeps diagnostics stable.
    std::map<std::string, std::vector<Entry>> cases;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() == 1 && row.fields[0].empty()) continue;
        std::size_t needed = std::max(case_idx, activity_idx);
        if (order_idx) needed = std::max(needed, *order_idx);
        if (row.fields.size() <= needed)
            throw ParseError("CSV parse error: row " +
                             std::to_string(row.line_number) +
                             " has too few fields");
        Entry entry;
        entry.activity = row.fields[activity_idx];
        entry.file_order = r;
        if (order_idx) {
            entry.order_value = row.fields[*order_idx];
            if (entry.order_value.empty())
                throw ParseError("CSV parse error: empty order value at row " +
                                 std::to_string(row.line_number));
        }
        cases[row.fields[case_idx]].push_back(std::move(entry));
    }

    EventLog log;
    for (auto& [case_id, entries] : cases) {
        if (order_idx) {
            bool numeric = std::all_of(
                entries.begin(), entries.end(),
                [](const Entry& e) { return is_numeric(e.order_value); });
            std::stable_sort(entries.begin(), entries.end(),
                             [numeric](const Entry& a, const Entry& b) {
                                 if (numeric)
                                     return std::stod(a.order_value) <
                                            std::stod(b.order_value);
                                 return a.order_value < b.order_value;
                             });
        }
        Trace trace;
        // Rows with an empty activity field mark the case without
        // contributing an event; write_csv uses one such row to keep
        // empty traces representable.
        for (const auto& entry : entries)
            if (!entry.activity.empty()) trace.push_back(entry.activity);
        log.add_trace(trace);
    }
    return log;
}

void write_csv(std::ostream& out, const EventLog& log) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q += c;
        }
        return q + "\"";
    };
    out << "case,activity,index\n";
    std::int64_t case_id = 0;
    for (const auto& [trace, count] : log.variants()) {
        for (std::int64_t k = 0; k < count; ++k) {
            ++case_id;
            for (std::size_t i = 0; i < trace.size(); ++i)
                out << "c" << case_id << "," << quote(trace[i]) << ","
                    << (i + 1) << "\n";
            if (trace.empty())
                out << "c" << case_id << ",,0\n";
        }
    }
}

}  // namespace synmine
