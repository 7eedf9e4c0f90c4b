#include "procmine/petri_net.hpp"

#include <algorithm>

#include "procmine/error.hpp"

namespace procmine {

std::size_t Marking::total() const {
    std::size_t sum = 0;
    for (auto t : tokens) sum += t;
    return sum;
}

std::size_t MarkingHash::operator()(const Marking& m) const noexcept {
    // FNV-1a over the counts
    std::size_t h = 1469598103934665603ull;
    for (auto t : m.tokens) {
        h ^= t;
        h *= 1099511628211ull;
    }
    return h;
}

PlaceIndex PetriNet::add_place(std::string name, std::uint32_t initial_tokens) {
    if (place_index_.count(name)) throw ValidationError("duplicate place '" + name + "'");
    auto idx = static_cast<PlaceIndex>(places_.size());
    place_index_.emplace(name, idx);
    places_.push_back(std::move(name));
    initial_.tokens.push_back(initial_tokens);
    for (auto& f : finals_) f.tokens.push_back(0);
    return idx;
}

TransitionUid PetriNet::add_transition(std::string name, std::vector<PlaceIndex> inputs,
                                       std::vector<PlaceIndex> outputs, bool quoted) {
    Transition t;
    t.uid = static_cast<TransitionUid>(transitions_.size());
    t.name = std::move(name);
    t.visible = true;
    t.quoted = quoted;
    t.inputs = std::move(inputs);
    t.outputs = std::move(outputs);
    transitions_.push_back(std::move(t));
    return transitions_.back().uid;
}

std::optional<PlaceIndex> PetriNet::find_place(std::string_view name) const {
    auto it = place_index_.find(std::string(name));
    if (it == place_index_.end()) return std::nullopt;
    return it->second;
}

void PetriNet::set_initial_tokens(PlaceIndex p, std::uint32_t n) {
    if (p >= places_.size()) throw ValidationError("initial marking references an undeclared place");
    initial_.tokens[p] = n;
}

void PetriNet::add_final_marking(Marking m) {
    if (m.tokens.size() != places_.size()) throw ValidationError("final marking size does not match the place count");
    if (std::find(finals_.begin(), finals_.end(), m) == finals_.end()) finals_.push_back(std::move(m));
}

Marking PetriNet::single_token(PlaceIndex p) const {
    Marking m = empty_marking();
    m.tokens.at(p) = 1;
    return m;
}

bool PetriNet::enabled(const Marking& m, const Transition& t) const {
    for (auto p : t.inputs) {
        if (m.tokens[p] == 0) return false;
    }
    return true;
}

Marking PetriNet::fire(const Marking& m, const Transition& t) const {
    Marking next = m;
    for (auto p : t.inputs) --next.tokens[p];
    for (auto p : t.outputs) ++next.tokens[p];
    return next;
}

bool PetriNet::is_final(const Marking& m) const {
    return std::find(finals_.begin(), finals_.end(), m) != finals_.end();
}

std::vector<PlaceIndex> PetriNet::sink_places() const {
    std::vector<bool> has_out(places_.size(), false);
    for (const auto& t : transitions_) {
        for (auto p : t.inputs) has_out[p] = true;
    }
    std::vector<PlaceIndex> out;
    for (PlaceIndex p = 0; p < places_.size(); ++p) {
        if (!has_out[p]) out.push_back(p);
    }
    return out;
}

std::vector<PlaceIndex> PetriNet::source_places() const {
    std::vector<bool> has_in(places_.size(), false);
    for (const auto& t : transitions_) {
        for (auto p : t.outputs) has_in[p] = true;
    }
    std::vector<PlaceIndex> out;
    for (PlaceIndex p = 0; p < places_.size(); ++p) {
        if (!has_in[p]) out.push_back(p);
    }
    return out;
}

void PetriNet::validate() const {
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        const auto& t = transitions_[i];
        if (t.uid != i) throw ValidationError("transition uid out of sequence");
        for (const auto* arcs : {&t.inputs, &t.outputs}) {
            auto sorted = *arcs;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                throw ValidationError("duplicate arc on transition '" + t.name + "'");
            }
            for (auto p : sorted) {
                if (p >= places_.size()) {
                    throw ValidationError("transition '" + t.name + "' references an undeclared place");
                }
            }
        }
    }
}

bool same_structure(const PetriNet& a, const PetriNet& b) {
    if (a.places() != b.places()) return false;
    if (a.initial_marking() != b.initial_marking()) return false;
    if (a.transitions().size() != b.transitions().size()) return false;
    auto as_set = [](std::vector<PlaceIndex> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    for (std::size_t i = 0; i < a.transitions().size(); ++i) {
        const auto& ta = a.transitions()[i];
        const auto& tb = b.transitions()[i];
        if (ta.name != tb.name) return false;
        if (as_set(ta.inputs) != as_set(tb.inputs)) return false;
        if (as_set(ta.outputs) != as_set(tb.outputs)) return false;
    }
    return true;
}

bool is_helper_name(std::string_view name) { return name.substr(0, 2) == "x_"; }

}  // namespace procmine
