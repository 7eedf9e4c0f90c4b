#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procmine/petri_net.hpp"
#include "procmine/template_parser.hpp"

namespace procmine {

enum class Phase { start, complete, single, helper };

/// Where a transition came from.
struct TransitionOrigin {
    std::string node_id;  // Call/Manipulate id, empty for helpers
    Phase phase = Phase::helper;
};

struct TransformResult {
    PetriNet net;
    std::vector<TransitionOrigin> origins;  // indexed by TransitionUid
    /// End place of the top-level sequence; empty when every path terminates.
    std::optional<PlaceIndex> main_end;
    std::vector<PlaceIndex> terminate_sinks;
};

/// Builds the Petri net of a template, element by element in document order:
///
///  - call        `<label>_<id>_<url>_start` and `..._complete` in sequence
///  - manipulate  `<label>_<id>`
///  - terminate   `x_termination` into a fresh place without outgoing arcs
///  - loop        `x_loop` into the body, `x_closing_loop` from the body end
///                back to the body start; the flow continues at the body end
///  - choose      per branch an `x_alternative` from the current place and an
///                `x_closing_decision` into a shared merge place (branches
///                ending in terminate get no closing helper)
///  - parallel    `x_parallel` fork, `x_parallel_branch` per branch,
///                `x_closing_parallel` join
///
/// p0 carries the single initial token. Labels go through clean_label().
TransformResult transform_to_net(const TemplateDocument& doc);

/// Hides every `x_*` transition and installs the final markings: one token
/// on the main end place, plus one marking per terminate sink.
PetriNet finalize_net(const TransformResult& result);

/// Same for a net without transform provenance (e.g. read from TPN): hides
/// `x_*` transitions and adds one final marking per place without outgoing
/// arcs. Throws ValidationError when there is no such place.
PetriNet finalize_net(PetriNet net);

/// transform_to_net() followed by finalize_net().
PetriNet template_to_net(const TemplateDocument& doc);

}  // namespace procmine
