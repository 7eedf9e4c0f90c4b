#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace procmine {

/// Index into PetriNet::places().
using PlaceIndex = std::uint32_t;
/// Internal transition id. Names may repeat (`x_alternative`), uids never do.
using TransitionUid = std::uint32_t;

/// Token count per place, indexed by PlaceIndex.
struct Marking {
    std::vector<std::uint32_t> tokens;

    bool operator==(const Marking&) const = default;
    std::size_t total() const;
};

struct MarkingHash {
    std::size_t operator()(const Marking& m) const noexcept;
};

struct Transition {
    TransitionUid uid = 0;
    std::string name;
    bool visible = true;
    /// Emitted as `trans "name"` in TPN text.
    bool quoted = false;
    std::vector<PlaceIndex> inputs;   // no duplicates, emission order kept
    std::vector<PlaceIndex> outputs;
};

/// Place/transition net with unit arc weights.
class PetriNet {
public:
    PlaceIndex add_place(std::string name, std::uint32_t initial_tokens = 0);
    TransitionUid add_transition(std::string name, std::vector<PlaceIndex> inputs,
                                 std::vector<PlaceIndex> outputs, bool quoted = false);

    const std::vector<std::string>& places() const noexcept { return places_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    std::vector<Transition>& transitions() noexcept { return transitions_; }
    std::optional<PlaceIndex> find_place(std::string_view name) const;

    const Marking& initial_marking() const noexcept { return initial_; }
    void set_initial_tokens(PlaceIndex p, std::uint32_t n);

    const std::vector<Marking>& final_markings() const noexcept { return finals_; }
    void add_final_marking(Marking m);
    void clear_final_markings() { finals_.clear(); }

    Marking empty_marking() const { return Marking{std::vector<std::uint32_t>(places_.size(), 0)}; }
    Marking single_token(PlaceIndex p) const;

    bool enabled(const Marking& m, const Transition& t) const;
    /// Precondition: enabled(m, t).
    Marking fire(const Marking& m, const Transition& t) const;
    bool is_final(const Marking& m) const;

    /// Places without outgoing arcs, in place order.
    std::vector<PlaceIndex> sink_places() const;
    /// Places without incoming arcs, in place order.
    std::vector<PlaceIndex> source_places() const;

    /// Throws ValidationError when an arc references an undeclared place,
    /// an arc is duplicated or a uid repeats.
    void validate() const;

private:
    std::vector<std::string> places_;
    std::unordered_map<std::string, PlaceIndex> place_index_;
    Marking initial_;
    std::vector<Transition> transitions_;
    std::vector<Marking> finals_;
};

/// Same place names in the same order, same initial marking, and the same
/// transitions (names, order, input and output sets).
bool same_structure(const PetriNet& a, const PetriNet& b);

/// Helper transitions are the ones whose name starts with `x_`.
bool is_helper_name(std::string_view name);

}  // namespace procmine
