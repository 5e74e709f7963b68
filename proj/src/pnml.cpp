#include "synmine/pnml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <istream>
#include <map>
#include <ostream>

namespace synmine {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_pnml(std::ostream& out, const WorkflowNet& w) {
    const LabeledNet& net = w.net;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<pnml>\n  <net id=\"net1\" type=\"http://www.pnml.org/version-"
           "2009/grammar/ptnet\">\n    <page id=\"page1\">\n";
    for (NodeId p : net.places()) {
        out << "      <place id=\"" << xml_escape(net.name(p)) << "\">\n"
            << "        <name><text>" << xml_escape(net.name(p))
            << "</text></name>\n";
        if (p == w.source)
            out << "        <initialMarking><text>1</text></initialMarking>\n";
        out << "      </place>\n";
    }
    for (NodeId t : net.transitions()) {
        out << "      <transition id=\"" << xml_escape(net.name(t)) << "\">";
        if (auto label = net.label(t))
            out << "\n        <name><text>" << xml_escape(*label)
                << "</text></name>\n      ";
        out << "</transition>\n";
    }
    std::size_t arc_id = 0;
    for (const auto& [from, to] : net.arcs())
        out << "      <arc id=\"a" << ++arc_id << "\" source=\""
            << xml_escape(net.name(from)) << "\" target=\""
            << xml_escape(net.name(to)) << "\"/>\n";
    out << "    </page>\n  </net>\n</pnml>\n";
}

namespace {

void read_pnml_nodes(const boost::property_tree::ptree& node, LabeledNet& net,
                     std::map<std::string, NodeId>& by_id,
                     std::vector<std::pair<std::string, std::string>>& arcs) {
    for (const auto& [name, child] : node) {
        if (name == "place") {
            auto id = child.get_optional<std::string>("<xmlattr>.id");
            if (!id) throw StructureError("PNML place without id");
            by_id[*id] = net.add_place(*id);
        } else if (name == "transition") {
            auto id = child.get_optional<std::string>("<xmlattr>.id");
            if (!id) throw StructureError("PNML transition without id");
            auto label = child.get_optional<std::string>("name.text");
            by_id[*id] = net.add_transition(
                label ? std::optional<Activity>(*label) : std::nullopt, *id);
        } else if (name == "arc") {
            auto source = child.get_optional<std::string>("<xmlattr>.source");
            auto target = child.get_optional<std::string>("<xmlattr>.target");
            if (!source || !target)
                throw StructureError("PNML arc without source/target");
            arcs.emplace_back(*source, *target);
        } else if (name != "<xmlattr>") {
            read_pnml_nodes(child, net, by_id, arcs);
        }
    }
}

}  // namespace

WorkflowNet read_pnml(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_xml(in, tree);
    } catch (const boost::property_tree::xml_parser_error& e) {
        throw StructureError("PNML parse error at line " +
                             std::to_string(e.line()) + ": " + e.message());
    }
    WorkflowNet w;
    std::map<std::string, NodeId> by_id;
    std::vector<std::pair<std::string, std::string>> arcs;
    read_pnml_nodes(tree, w.net, by_id, arcs);
    if (w.net.places().empty())
        throw StructureError("PNML document contains no places");
    for (const auto& [source, target] : arcs) {
        auto s = by_id.find(source);
        auto t = by_id.find(target);
        if (s == by_id.end() || t == by_id.end())
            throw StructureError("PNML arc references unknown node");
        w.net.add_arc(s->second, t->second);
    }
    // Best-effort role recovery; workflow_net_diagnosis gives the full
    // verdict.
    NodeId source = 0, sink = 0;
    bool have_source = false, have_sink = false;
    for (NodeId p : w.net.places()) {
        if (w.net.preset(p).empty() && !have_source) {
            source = p;
            have_source = true;
        }
        if (w.net.postset(p).empty() && !have_sink) {
            sink = p;
            have_sink = true;
        }
    }
    if (!have_source || !have_sink)
        throw StructureError(
            "cannot identify source/sink places in PNML net");
    w.source = source;
    w.sink = sink;
    if (w.net.postset(source).empty() || w.net.preset(sink).empty())
        throw StructureError("source/sink places are disconnected");
    w.start = *w.net.postset(source).begin();
    w.end = *w.net.preset(sink).begin();
    std::string diagnosis = workflow_net_diagnosis(w);
    if (!diagnosis.empty())
        throw StructureError("not a workflow net: " + diagnosis);
    return w;
}

void write_dot(std::ostream& out, const WorkflowNet& w) {
    const LabeledNet& net = w.net;
    out << "digraph wfnet {\n  rankdir=LR;\n";
    for (NodeId p : net.places())
        out << "  \"" << net.name(p)
            << "\" [shape=circle, label=\"\", xlabel=\"" << net.name(p)
            << "\"];\n";
    for (NodeId t : net.transitions()) {
        if (auto label = net.label(t))
            out << "  \"" << net.name(t) << "\" [shape=box, label=\""
                << *label << "\"];\n";
        else
            out << "  \"" << net.name(t)
                << "\" [shape=box, label=\"\", style=filled, "
                   "fillcolor=black];\n";
    }
    for (const auto& [from, to] : net.arcs())
        out << "  \"" << net.name(from) << "\" -> \"" << net.name(to)
            << "\";\n";
    out << "}\n";
}

}  // namespace synmine
