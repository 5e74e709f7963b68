// Python bindings for the discovery engine's main operations.
#include "synmine/conformance.hpp"
#include "synmine/discovery.hpp"
#include "synmine/event_log.hpp"
#include "synmine/log_io.hpp"
#include "synmine/patterns.hpp"
#include "synmine/petri_net.hpp"
#include "synmine/pnml.hpp"
#include "synmine/rational.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

namespace py = pybind11;
using namespace synmine;

namespace {

double as_double(const Rat& r) { return r.convert_to<double>(); }

Rat rat_from_double(double x) {
    // Exact conversion of the binary double; good enough for thresholds.
    return Rat(x);
}

EventLog load_log(const std::string& path, const std::string& case_column,
                  const std::string& activity_column,
                  const std::optional<std::string>& order_column) {
    std::ifstream in(path);
    if (!in.good()) throw ParseError("cannot open " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".xes")
        return parse_xes(in);
    return parse_csv(in, case_column, activity_column, order_column);
}

py::dict score_dict(const Score& s) {
    py::dict d;
    d["fitness"] = as_double(s.fitness);
    d["precision"] = as_double(s.precision);
    d["f1"] = as_double(s.f1);
    d["fitness_exact"] = to_fraction_string(s.fitness);
    d["precision_exact"] = to_fraction_string(s.precision);
    d["f1_exact"] = to_fraction_string(s.f1);
    return d;
}

}  // namespace

PYBIND11_MODULE(_synmine, m) {
    m.doc() = "Incremental discovery of sound free-choice workflow nets";

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<StructureError>(m, "StructureError");
    py::register_exception<InconclusiveError>(m, "InconclusiveError");

    py::class_<EventLog>(m, "EventLog")
        .def(py::init<>())
        .def("add_trace", &EventLog::add_trace, py::arg("trace"),
             py::arg("count") = 1)
        .def_property_readonly("total_traces", &EventLog::total_traces)
        .def_property_readonly("activities", &EventLog::activities)
        .def_property_readonly("variants",
                               [](const EventLog& log) {
                                   py::dict d;
                                   for (const auto& [trace, count] :
                                        log.variants())
                                       d[py::tuple(py::cast(trace))] = count;
                                   return d;
                               })
        .def("__eq__", [](const EventLog& a, const EventLog& b) {
            return a == b;
        });

    py::class_<WorkflowNet>(m, "WorkflowNet")
        .def_property_readonly("place_count",
                               [](const WorkflowNet& w) {
                                   return w.net.places().size();
                               })
        .def_property_readonly("transition_count",
                               [](const WorkflowNet& w) {
                                   return w.net.transitions().size();
                               })
        .def_property_readonly("labels",
                               [](const WorkflowNet& w) {
                                   return w.net.label_set();
                               })
        .def("is_sound",
             [](const WorkflowNet& w, std::size_t cap) {
                 return is_sound(w, cap);
             },
             py::arg("state_cap") = 100'000)
        .def("is_free_choice",
             [](const WorkflowNet& w) { return is_free_choice(w.net); })
        .def("is_workflow_net",
             [](const WorkflowNet& w) { return is_workflow_net(w); })
        .def("canonical_key",
             [](const WorkflowNet& w) { return canonical_key(w); })
        .def("to_pnml",
             [](const WorkflowNet& w) {
                 std::ostringstream out;
                 write_pnml(out, w);
                 return out.str();
             })
        .def("to_dot", [](const WorkflowNet& w) {
            std::ostringstream out;
            write_dot(out, w);
            return out.str();
        });

    m.def("initial_net", &initial_net);

    m.def("read_log", &load_log, py::arg("path"),
          py::arg("case_column") = "case",
          py::arg("activity_column") = "activity",
          py::arg("order_column") = std::nullopt,
          "Reads an event log from .xes or .csv");

    m.def("read_pnml_string", [](const std::string& text) {
        std::istringstream in(text);
        return read_pnml(in);
    });

    m.def(
        "discover",
        [](const EventLog& log, double theta, double causal_threshold,
           const std::string& ordering, std::size_t max_candidates,
           std::size_t state_cap) {
            DiscoveryConfig config;
            config.theta = rat_from_double(theta);
            config.causal_threshold = rat_from_double(causal_threshold);
            config.ordering = ordering == "frequency"
                                  ? OrderingStrategy::frequency
                                  : OrderingStrategy::bfs;
            config.caps.max_candidates = max_candidates;
            config.state_cap = state_cap;
            DiscoveryResult result = discover(log, config);
            py::list iterations;
            for (const auto& rec : result.iterations) {
                py::dict d;
                d["index"] = rec.index;
                d["activity"] = rec.activity;
                d["pruned_nodes"] = rec.pruned_node_count;
                d["total_nodes"] = rec.total_node_count;
                d["pruning_ratio"] = as_double(rec.pruning_ratio);
                d["candidates"] = rec.candidate_count;
                d["rule"] = to_string(rec.selected.rule.kind);
                d["pattern"] = to_string(rec.selected.pattern);
                d["fall_through"] = rec.fall_through;
                d["fitness"] = as_double(rec.scores.fitness);
                d["precision"] = as_double(rec.scores.precision);
                d["f1"] = as_double(rec.scores.f1);
                iterations.append(d);
            }
            py::dict out;
            out["net"] = result.net;
            out["order"] = result.order;
            out["iterations"] = iterations;
            return out;
        },
        py::arg("log"), py::arg("theta") = 0.95,
        py::arg("causal_threshold") = 0.9, py::arg("ordering") = "bfs",
        py::arg("max_candidates") = 5000, py::arg("state_cap") = 100'000);

    m.def(
        "score",
        [](const WorkflowNet& w, const EventLog& log, std::size_t cap) {
            return score_dict(score(w, log, cap));
        },
        py::arg("net"), py::arg("log"), py::arg("state_cap") = 100'000);

    m.def(
        "alignment_cost",
        [](const WorkflowNet& w, const Trace& trace, std::size_t cap) {
            return optimal_alignment(w, trace, cap).cost;
        },
        py::arg("net"), py::arg("trace"), py::arg("state_cap") = 100'000);
}
