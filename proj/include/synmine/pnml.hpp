#pragma once

#include "synmine/petri_net.hpp"

#include <iosfwd>

namespace synmine {

// PNML writer: place/transition/arc with names; silent transitions carry
// no <name> element.
void write_pnml(std::ostream& out, const WorkflowNet& w);

// PNML reader. WF-net roles are recovered structurally: the unique place
// without input arcs is the source, the unique place without output arcs
// is the sink, and the transitions adjacent to them are start/end.
// Throws StructureError with a diagnosis if the net is not a WF-net.
WorkflowNet read_pnml(std::istream& in);

// DOT export: places as circles, transitions as boxes, silent
// transitions filled black.
void write_dot(std::ostream& out, const WorkflowNet& w);

}  // namespace synmine
