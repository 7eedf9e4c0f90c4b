#pragma once

#include <string>
#include <string_view>

#include "procmine/petri_net.hpp"

namespace procmine {

/// Writes the net in TPN text form: every place first (`place p0 init 1;`),
/// then every transition as
///
///     trans name
///       in p0, p1
///       out p2;
///
/// Names of quoted transitions are wrapped in double quotes. Visibility and
/// final markings are not part of the format.
std::string emit_tpn(const PetriNet& net);

/// Reads TPN text. Accepts quoted and bare transition names and any
/// non-negative `init` count. Throws ParseError (with line) on bad syntax
/// or references to undeclared places. All transitions come back visible.
PetriNet parse_tpn(std::string_view text);

}  // namespace procmine
