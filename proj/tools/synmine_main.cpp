// Command-line front end: discover (log -> net), evaluate (net + log ->
// scores), check (net -> structural verdicts).
#include "synmine/conformance.hpp"
#include "synmine/discovery.hpp"
#include "synmine/event_log.hpp"
#include "synmine/log_io.hpp"
#include "synmine/patterns.hpp"
#include "synmine/pnml.hpp"
#include "synmine/rational.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

using namespace synmine;
using nlohmann::json;

namespace {

// Exact decimal-to-rational parse: "0.95" -> 19/20.
Rat parse_decimal(const std::string& text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-'))
        negative = text[pos++] == '-';
    std::string digits;
    std::size_t scale = 0;
    bool seen_dot = false, seen_digit = false;
    for (; pos < text.size(); ++pos) {
        char ch = text[pos];
        if (ch == '.') {
            if (seen_dot) throw ParseError("bad decimal: " + text);
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            seen_digit = true;
            if (seen_dot) ++scale;
        } else {
            throw ParseError("bad decimal: " + text);
        }
    }
    if (!seen_digit) throw ParseError("bad decimal: " + text);
    // Strip leading zeros: cpp_int would read them as an octal prefix.
    std::size_t first = digits.find_first_not_of('0');
    digits = first == std::string::npos ? "0" : digits.substr(first);
    Rat numerator{boost::multiprecision::cpp_int(digits)};
    Rat denominator(1);
    for (std::size_t i = 0; i < scale; ++i) denominator *= 10;
    Rat value = numerator / denominator;
    return negative ? -value : value;
}

struct LogOptions {
    std::string case_column = "case";
    std::string activity_column = "activity";
    std::string order_column;
};

void add_log_options(CLI::App* cmd, LogOptions& options) {
    cmd->add_option("--case-column", options.case_column,
                    "CSV column holding the case id (default: case)");
    cmd->add_option("--activity-column", options.activity_column,
                    "CSV column holding the activity (default: activity)");
    cmd->add_option("--order-column", options.order_column,
                    "CSV column ordering events within a case "
                    "(default: file order)");
}

EventLog read_log(const std::string& path, const LogOptions& options) {
    std::ifstream in(path);
    if (!in.good()) throw ParseError("cannot open " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".xes")
        return parse_xes(in);
    std::optional<std::string> order;
    if (!options.order_column.empty()) order = options.order_column;
    return parse_csv(in, options.case_column, options.activity_column, order);
}

WorkflowNet read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ParseError("cannot open " + path);
    return read_pnml(in);
}

json rational_entry(const Rat& value) {
    return {{"exact", to_fraction_string(value)},
            {"decimal", to_decimal_string(value, 6)}};
}

json score_entry(const Score& s) {
    return {{"fitness", to_fraction_string(s.fitness)},
            {"fitness_decimal", to_decimal_string(s.fitness, 6)},
            {"precision", to_fraction_string(s.precision)},
            {"precision_decimal", to_decimal_string(s.precision, 6)},
            {"f1", to_fraction_string(s.f1)},
            {"f1_decimal", to_decimal_string(s.f1, 6)}};
}

void write_file(const std::string& path,
                const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path);
    if (!out.good()) throw ParseError("cannot write " + path);
    writer(out);
}

int run_discover(const std::string& input, const LogOptions& log_options,
                 const std::string& theta_text, const std::string& c_text,
                 const std::string& ordering_text,
                 const std::string& coverage_text,
                 std::size_t max_candidates, std::size_t state_cap,
                 const std::string& out_pnml, const std::string& out_dot,
                 const std::string& report_path) {
    auto start = std::chrono::steady_clock::now();
    EventLog full_log = read_log(input, log_options);

    DiscoveryConfig config;
    config.theta = parse_decimal(theta_text);
    config.causal_threshold = parse_decimal(c_text);
    config.ordering = ordering_text == "frequency"
                          ? OrderingStrategy::frequency
                          : OrderingStrategy::bfs;
    config.caps.max_candidates = max_candidates;
    config.state_cap = state_cap;

    Rat coverage = parse_decimal(coverage_text);
    EventLog log = coverage >= Rat(1)
                       ? full_log
                       : filter_variant_coverage(full_log, coverage);

    DiscoveryResult result = discover(log, config);
    Score final_scores = score(result.net, full_log, config.state_cap);
    double total = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();

    if (!out_pnml.empty())
        write_file(out_pnml,
                   [&](std::ostream& o) { write_pnml(o, result.net); });
    if (!out_dot.empty())
        write_file(out_dot,
                   [&](std::ostream& o) { write_dot(o, result.net); });

    json doc;
    doc["config"] = {{"theta", rational_entry(config.theta)},
                     {"causal_threshold",
                      rational_entry(config.causal_threshold)},
                     {"ordering", ordering_text},
                     {"variant_coverage", rational_entry(coverage)},
                     {"max_candidates", config.caps.max_candidates},
                     {"state_cap", config.state_cap}};
    doc["order"] = result.order;
    doc["iterations"] = json::array();
    for (const auto& rec : result.iterations) {
        json names_first = json::array(), names_second = json::array();
        for (NodeId n : rec.selected.rule.first)
            names_first.push_back(result.net.net.name(n));
        for (NodeId n : rec.selected.rule.second)
            names_second.push_back(result.net.net.name(n));
        doc["iterations"].push_back(
            {{"index", rec.index},
             {"activity", rec.activity},
             {"projected_variants", rec.projected_variant_count},
             {"pruned_nodes", rec.pruned_node_count},
             {"total_nodes", rec.total_node_count},
             {"pruning_ratio", to_fraction_string(rec.pruning_ratio)},
             {"pruning_ratio_decimal",
              to_decimal_string(rec.pruning_ratio, 6)},
             {"candidates", rec.candidate_count},
             {"rule", to_string(rec.selected.rule.kind)},
             {"rule_preset", names_first},
             {"rule_postset", names_second},
             {"pattern", to_string(rec.selected.pattern)},
             {"fall_through", rec.fall_through},
             {"fitness", to_fraction_string(rec.scores.fitness)},
             {"fitness_decimal", to_decimal_string(rec.scores.fitness, 6)},
             {"precision", to_fraction_string(rec.scores.precision)},
             {"f1", to_fraction_string(rec.scores.f1)},
             {"wall_time_seconds", rec.wall_time_seconds}});
    }
    doc["final"] = score_entry(final_scores);
    doc["total_wall_time_seconds"] = total;

    if (!report_path.empty())
        write_file(report_path,
                   [&](std::ostream& o) { o << doc.dump(2) << "\n"; });

    std::cout << "order:";
    for (const auto& a : result.order) std::cout << " " << a;
    std::cout << "\nfitness " << to_decimal_string(final_scores.fitness, 6)
              << "  precision "
              << to_decimal_string(final_scores.precision, 6) << "  f1 "
              << to_decimal_string(final_scores.f1, 6) << std::endl;
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& log_path,
                 const LogOptions& log_options, std::size_t state_cap,
                 const std::string& report_path) {
    WorkflowNet w = read_model(model_path);
    std::string diagnosis = workflow_net_diagnosis(w);
    if (!diagnosis.empty()) {
        std::cerr << "not a workflow net: " << diagnosis << std::endl;
        return 1;
    }
    EventLog log = read_log(log_path, log_options);
    Score s = score(w, log, state_cap);
    std::cout << "fitness " << to_decimal_string(s.fitness, 6) << "\n"
              << "precision " << to_decimal_string(s.precision, 6) << "\n"
              << "f1 " << to_decimal_string(s.f1, 6) << std::endl;
    if (!report_path.empty()) {
        json doc = score_entry(s);
        write_file(report_path,
                   [&](std::ostream& o) { o << doc.dump(2) << "\n"; });
    }
    return 0;
}

int run_check(const std::string& model_path, std::size_t state_cap) {
    WorkflowNet w;
    try {
        w = read_model(model_path);
    } catch (const StructureError& e) {
        // Not a workflow net (or unreadable): report the verdict rather
        // than failing, since producing verdicts is this command's job.
        std::cout << "workflow-net: false" << std::endl;
        std::cout << "  reason: " << e.what() << std::endl;
        return 0;
    }
    std::string diagnosis = workflow_net_diagnosis(w);
    std::cout << "workflow-net: " << (diagnosis.empty() ? "true" : "false")
              << std::endl;
    if (!diagnosis.empty()) std::cout << "  reason: " << diagnosis << "\n";
    auto violation = free_choice_violation(w.net);
    std::cout << "free-choice: " << (violation ? "false" : "true")
              << std::endl;
    if (violation)
        std::cout << "  offending transitions: "
                  << w.net.name(violation->first) << ", "
                  << w.net.name(violation->second) << "\n";
    bool sound = is_sound(w, state_cap);  // InconclusiveError -> exit 2
    std::cout << "sound: " << (sound ? "true" : "false") << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental discovery of sound free-choice workflow nets"};
    app.require_subcommand(1);

    // discover
    auto* discover_cmd =
        app.add_subcommand("discover", "Discover a net from an event log");
    std::string input, theta = "0.95", causal = "0.9", ordering = "bfs";
    std::string coverage = "0.95", out_pnml, out_dot, report_path;
    std::size_t max_candidates = 5000, state_cap = 100'000;
    int jobs = 1;
    LogOptions discover_log_options;
    discover_cmd->add_option("input", input, "event log (.xes or .csv)")
        ->required();
    discover_cmd->add_option("--theta", theta,
                             "replay-fitness threshold (default 0.95)");
    discover_cmd->add_option("--causal-threshold", causal,
                             "causal-strength threshold (default 0.9)");
    discover_cmd->add_option("--ordering", ordering, "bfs or frequency")
        ->check(CLI::IsMember({"bfs", "frequency"}));
    discover_cmd->add_option(
        "--variant-coverage", coverage,
        "keep most frequent variants covering this case share "
        "(default 0.95; 1.0 disables)");
    discover_cmd->add_option("--max-candidates", max_candidates,
                             "candidate cap per iteration");
    discover_cmd->add_option("--state-cap", state_cap,
                             "marking cap for replay and soundness");
    discover_cmd->add_option("--out-pnml", out_pnml, "write the net as PNML");
    discover_cmd->add_option("--out-dot", out_dot, "write the net as DOT");
    discover_cmd->add_option("--report", report_path, "write a JSON report");
    discover_cmd->add_option("--jobs", jobs, "worker bound (reserved)");
    add_log_options(discover_cmd, discover_log_options);

    // evaluate
    auto* evaluate_cmd = app.add_subcommand(
        "evaluate", "Score a PNML net against an event log");
    std::string eval_model, eval_log, eval_report;
    std::size_t eval_state_cap = 100'000;
    LogOptions eval_log_options;
    evaluate_cmd->add_option("model", eval_model, "net (.pnml)")->required();
    evaluate_cmd->add_option("log", eval_log, "event log (.xes or .csv)")
        ->required();
    evaluate_cmd->add_option("--state-cap", eval_state_cap,
                             "marking cap for replay");
    evaluate_cmd->add_option("--report", eval_report, "write a JSON report");
    add_log_options(evaluate_cmd, eval_log_options);

    // check
    auto* check_cmd = app.add_subcommand(
        "check", "Structural and behavioral verdicts for a PNML net");
    std::string check_model;
    std::size_t check_state_cap = 100'000;
    check_cmd->add_option("model", check_model, "net (.pnml)")->required();
    check_cmd->add_option("--state-cap", check_state_cap,
                          "marking cap for the soundness check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (discover_cmd->parsed())
            return run_discover(input, discover_log_options, theta, causal,
                                ordering, coverage, max_candidates, state_cap,
                                out_pnml, out_dot, report_path);
        if (evaluate_cmd->parsed())
            return run_evaluate(eval_model, eval_log, eval_log_options,
                                eval_state_cap, eval_report);
        if (check_cmd->parsed()) return run_check(check_model, check_state_cap);
    } catch (const InconclusiveError& e) {
        std::cerr << "inconclusive: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 1;
}
