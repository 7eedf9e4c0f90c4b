#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "procmine/petri_net.hpp"
#include "procmine/xes.hpp"

namespace procmine::conformance {

enum class MappingKind { label, endpoint };

MappingKind parse_mapping_kind(const std::string& name);

/// What a transition name says about its origin.
struct TransitionKey {
    enum class Kind { call, manipulate, other };
    Kind kind = Kind::other;
    std::string label;  // cleaned label (call, manipulate) or full name (other)
    std::string id;
    std::string url;
    std::string phase;  // start | complete for calls
};

/// Splits `<label>_<id>_<url>_start|_complete` and `<label>_<id>`. Task ids
/// are letters followed by digits (`a12`); anything else is `other`.
TransitionKey parse_transition_name(const std::string& name);

/// Candidate transitions for one log event. An empty candidate list means
/// the event can only be explained by a log move.
struct MappedEvent {
    std::vector<TransitionUid> candidates;
    std::string key;  // classifier value, used for grouping identical traces
};

using MappedTrace = std::vector<MappedEvent>;

/// Label mapping: event (clean_label(concept:name), phase) against call
/// transitions with the same label and phase, and manipulate transitions
/// with the same label (any phase). Endpoint mapping: (cpee:endpoint,
/// phase) against call transitions with that URL and phase. Invisible
/// transitions never take part.
MappedTrace map_trace(const logs::XesTrace& trace, MappingKind kind, const PetriNet& net);

struct AlignmentCosts {
    std::uint32_t model = 1;
    std::uint32_t log = 1;
    std::uint32_t sync = 0;
    std::uint32_t invisible = 0;
};

enum class MoveKind { synchronous, model, log, invisible_model };

struct Move {
    MoveKind kind;
    std::optional<TransitionUid> transition;
    std::optional<std::size_t> event;
    bool operator==(const Move&) const = default;
};

struct Alignment {
    std::vector<Move> moves;
    std::uint64_t raw_cost = 0;
    std::size_t expanded_states = 0;
};

struct SearchLimits {
    std::size_t max_states = 4'000'000;
};

/// Minimum-cost alignment whose model side ends in one of the net's final
/// markings (improper completion is not allowed). A* over the synchronous
/// product with the remaining unmappable events as the heuristic; among
/// alignments of equal cost the one with the fewest log moves is returned.
/// Throws ModelInfeasible when no final marking is reachable and Error
/// when the state limit is exceeded.
Alignment align(const PetriNet& net, const MappedTrace& trace, const AlignmentCosts& costs = {},
                const SearchLimits& limits = {});

/// Cost of completing the empty trace with model moves only.
std::uint64_t empty_trace_cost(const PetriNet& net, const AlignmentCosts& costs = {}, const SearchLimits& limits = {});

struct FitnessTriple {
    double move_model = 1.0;
    double move_log = 1.0;
    double trace = 1.0;
};

struct MoveCounts {
    std::size_t synchronous = 0;
    std::size_t model = 0;  // visible model moves
    std::size_t log = 0;
    std::size_t invisible = 0;
};

MoveCounts count_moves(const Alignment& alignment);

/// move_model = sync / (sync + model), move_log = sync / (sync + log),
/// trace = 1 - raw / (empty_cost + log_cost * trace_length). A zero
/// denominator gives 1.
FitnessTriple fitness(const Alignment& alignment, std::uint64_t empty_cost, std::size_t trace_length,
                      const AlignmentCosts& costs = {});

/// Convenience overload that computes the empty-trace cost itself.
FitnessTriple fitness(const Alignment& alignment, const PetriNet& net, const MappedTrace& trace,
                      const AlignmentCosts& costs = {});

struct NamedNet {
    std::string name;
    PetriNet net;
};

enum Metric { kMoveModel = 0, kMoveLog = 1, kTrace = 2 };

struct FitnessRow {
    std::string group_id;
    std::vector<std::string> members;  // trace concept:names
    std::size_t multiplicity = 0;
    std::vector<std::optional<FitnessTriple>> cells;  // per template, empty when infeasible
    std::array<std::vector<std::size_t>, 3> argmax;   // per metric, template indices
};

struct FitnessTable {
    std::vector<std::string> templates;
    std::vector<FitnessRow> rows;
    std::vector<std::string> warnings;
};

struct TableOptions {
    MappingKind mapping = MappingKind::label;
    AlignmentCosts costs;
    SearchLimits limits;
    unsigned jobs = 1;
};

/// Groups identical traces (same classifier sequence), aligns each group
/// against every template and flags the per-metric maxima.
FitnessTable build_fitness_table(const logs::XesDocument& xes, const std::vector<NamedNet>& templates,
                                 const TableOptions& options = {});

struct Assignment {
    std::optional<std::size_t> template_index;  // empty when every cell is missing
    bool conflict = false;  // move-log and trace fitness maxima do not overlap
    bool tie = false;       // several templates qualified; the lowest index won
};

/// Picks the template that maximises move-log and trace fitness jointly.
Assignment assign_template(const FitnessRow& row);

/// Plot-ready CSV: group_id, multiplicity, then per template
/// `<t>_move_model,<t>_move_log,<t>_trace`, then the three argmax columns,
/// `conflict` and `assigned`.
std::string fitness_table_csv(const FitnessTable& table);

}  // namespace procmine::conformance
