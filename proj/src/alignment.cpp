#include <algorithm>
#include <queue>
#include <regex>
#include <unordered_map>

#include "procmine/conformance.hpp"
#include "procmine/error.hpp"
#include "procmine/template_parser.hpp"

namespace procmine::conformance {

MappingKind parse_mapping_kind(const std::string& name) {
    if (name == "label") return MappingKind::label;
    if (name == "endpoint") return MappingKind::endpoint;
    throw ValidationError("unknown mapping '" + name + "' (expected label or endpoint)");
}

TransitionKey parse_transition_name(const std::string& name) {
    static const std::regex call_re(R"(^(.*?)_([A-Za-z]*[0-9]+)_(.+)_(start|complete)$)");
    static const std::regex manipulate_re(R"(^(.*)_([A-Za-z]*[0-9]+)$)");
    TransitionKey key;
    std::smatch m;
    if (std::regex_match(name, m, call_re)) {
        key.kind = TransitionKey::Kind::call;
        key.label = m[1];
        key.id = m[2];
        key.url = m[3];
        key.phase = m[4];
    } else if (std::regex_match(name, m, manipulate_re)) {
        key.kind = TransitionKey::Kind::manipulate;
        key.label = m[1];
        key.id = m[2];
    } else {
        key.label = name;
    }
    return key;
}

MappedTrace map_trace(const logs::XesTrace& trace, MappingKind kind, const PetriNet& net) {
    std::vector<TransitionKey> keys;
    keys.reserve(net.transitions().size());
    for (const auto& t : net.transitions()) keys.push_back(parse_transition_name(t.name));

    MappedTrace out;
    out.reserve(trace.events.size());
    for (const auto& e : trace.events) {
        MappedEvent me;
        std::string phase = logs::event_phase(e);
        if (kind == MappingKind::label) {
            std::string label = clean_label(e.get("concept:name"));
            me.key = label + "+" + phase;
            for (const auto& t : net.transitions()) {
                if (!t.visible) continue;
                const auto& k = keys[t.uid];
                bool hit = false;
                switch (k.kind) {
                    case TransitionKey::Kind::call: hit = k.label == label && k.phase == phase; break;
                    case TransitionKey::Kind::manipulate: hit = k.label == label; break;
                    case TransitionKey::Kind::other: hit = k.label == label; break;
                }
                if (hit) me.candidates.push_back(t.uid);
            }
        } else {
            const auto& endpoint = e.get("cpee:endpoint");
            me.key = endpoint + "+" + phase;
            if (!endpoint.empty()) {
                for (const auto& t : net.transitions()) {
                    const auto& k = keys[t.uid];
                    if (t.visible && k.kind == TransitionKey::Kind::call && k.url == endpoint && k.phase == phase) {
                        me.candidates.push_back(t.uid);
                    }
                }
            }
        }
        out.push_back(std::move(me));
    }
    return out;
}

namespace {

// Markings are stored sparsely: the nets are mostly safe and only a handful
// of places carry tokens at any time.
using Sparse = std::vector<std::pair<PlaceIndex, std::uint32_t>>;

struct SparseHash {
    std::size_t operator()(const Sparse& m) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (const auto& [p, c] : m) {
            h ^= p + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

Sparse to_sparse(const Marking& m) {
    Sparse s;
    for (PlaceIndex p = 0; p < m.tokens.size(); ++p) {
        if (m.tokens[p]) s.emplace_back(p, m.tokens[p]);
    }
    return s;
}

class MarkingTable {
public:
    std::uint32_t intern(Sparse m) {
        auto it = ids_.find(m);
        if (it != ids_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(all_.size());
        all_.push_back(m);
        ids_.emplace(std::move(m), id);
        return id;
    }
    const Sparse& at(std::uint32_t id) const { return all_[id]; }

private:
    std::vector<Sparse> all_;
    std::unordered_map<Sparse, std::uint32_t, SparseHash> ids_;
};

struct SearchNode {
    std::uint32_t marking;
    std::uint32_t pos;
    std::uint64_t cost = 0;
    std::uint64_t log_moves = 0;
    std::int64_t parent = -1;
    Move move{MoveKind::log, std::nullopt, std::nullopt};
    bool closed = false;
};

struct QueueEntry {
    std::uint64_t f;
    std::uint64_t log_moves;
    std::uint32_t pos;
    std::size_t node;
    // min-heap on (f, log_moves), then deeper trace position, then newest first
    bool operator>(const QueueEntry& o) const {
        if (f != o.f) return f > o.f;
        if (log_moves != o.log_moves) return log_moves > o.log_moves;
        if (pos != o.pos) return pos < o.pos;
        return node < o.node;
    }
};

}  // namespace

Alignment align(const PetriNet& net, const MappedTrace& trace, const AlignmentCosts& costs,
                const SearchLimits& limits) {
    if (net.final_markings().empty()) throw ModelInfeasible("net has no final marking");
    const auto n = static_cast<std::uint32_t>(trace.size());
    const std::size_t tcount = net.transitions().size();
    const auto& transitions = net.transitions();

    // candidate lookup and the heuristic: unmappable events left to explain
    std::vector<std::vector<char>> is_candidate(n, std::vector<char>(tcount, 0));
    std::vector<std::uint64_t> unmapped_suffix(n + 1, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (auto uid : trace[i].candidates) {
            if (uid >= tcount) throw ValidationError("mapped trace references an unknown transition");
            is_candidate[i][uid] = 1;
        }
    }
    for (std::uint32_t i = n; i-- > 0;) {
        unmapped_suffix[i] = unmapped_suffix[i + 1] + (trace[i].candidates.empty() ? 1 : 0);
    }
    auto h = [&](std::uint32_t pos) { return costs.log * unmapped_suffix[pos]; };

    // transitions that consume from each place; input-free ones are always candidates
    std::vector<std::vector<std::uint32_t>> consumers(net.places().size());
    std::vector<std::uint32_t> sourceless;
    for (std::uint32_t t = 0; t < tcount; ++t) {
        if (transitions[t].inputs.empty()) sourceless.push_back(t);
        for (auto p : transitions[t].inputs) consumers[p].push_back(t);
    }

    MarkingTable markings;
    std::vector<std::uint32_t> finals;
    for (const auto& f : net.final_markings()) finals.push_back(markings.intern(to_sparse(f)));
    std::sort(finals.begin(), finals.end());

    // A transition that alone consumes from its input places, none of which is
    // marked in a final marking, fires in every completion. Firing it first
    // changes neither cost nor enabledness of anything else, so such a state
    // only needs that one successor (for visible ones only once the trace is
    // used up, where their position no longer matters).
    std::vector<char> inevitable(tcount, 0);
    {
        std::vector<char> in_final(net.places().size(), 0);
        for (const auto& f : net.final_markings()) {
            for (PlaceIndex p = 0; p < f.tokens.size(); ++p) in_final[p] |= f.tokens[p] > 0;
        }
        for (std::uint32_t t = 0; t < tcount; ++t) {
            const auto& tr = transitions[t];
            bool ok = !tr.inputs.empty();
            for (auto p : tr.inputs) {
                ok = ok && consumers[p].size() == 1 && !in_final[p] &&
                     std::find(tr.outputs.begin(), tr.outputs.end(), p) == tr.outputs.end();
            }
            inevitable[t] = ok;
        }
    }

    std::vector<SearchNode> nodes;
    std::unordered_map<std::uint64_t, std::size_t> index;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
    auto key_of = [](std::uint32_t m, std::uint32_t pos) { return (static_cast<std::uint64_t>(m) << 32) | pos; };

    auto relax = [&](std::uint32_t m, std::uint32_t pos, std::uint64_t cost, std::uint64_t log_moves,
                     std::int64_t parent, Move move) {
        auto key = key_of(m, pos);
        auto it = index.find(key);
        if (it != index.end()) {
            SearchNode& existing = nodes[it->second];
            if (existing.closed) return;
            if (std::tie(existing.cost, existing.log_moves) <= std::tie(cost, log_moves)) return;
            existing.cost = cost;
            existing.log_moves = log_moves;
            existing.parent = parent;
            existing.move = move;
            open.push({cost + h(pos), log_moves, pos, it->second});
            return;
        }
        if (nodes.size() >= limits.max_states) throw Error("alignment state limit exceeded");
        nodes.push_back(SearchNode{m, pos, cost, log_moves, parent, move, false});
        index.emplace(key, nodes.size() - 1);
        open.push({cost + h(pos), log_moves, pos, nodes.size() - 1});
    };

    relax(markings.intern(to_sparse(net.initial_marking())), 0, 0, 0, -1,
          Move{MoveKind::log, std::nullopt, std::nullopt});

    std::vector<std::uint32_t> dense(net.places().size(), 0);
    std::vector<std::uint32_t> enabled;
    std::vector<std::uint64_t> seen(tcount, 0);
    std::uint64_t stamp = 0;

    while (!open.empty()) {
        QueueEntry top = open.top();
        open.pop();
        SearchNode& cur_ref = nodes[top.node];
        if (cur_ref.closed || top.f != cur_ref.cost + h(cur_ref.pos) || top.log_moves != cur_ref.log_moves) {
            continue;
        }
        cur_ref.closed = true;
        const std::size_t cur = top.node;
        const std::uint32_t mid = cur_ref.marking;
        const std::uint32_t pos = cur_ref.pos;
        const std::uint64_t g = cur_ref.cost;
        const std::uint64_t lm = cur_ref.log_moves;

        if (pos == n && std::binary_search(finals.begin(), finals.end(), mid)) {
            Alignment a;
            a.raw_cost = g;
            a.expanded_states = nodes.size();
            for (std::int64_t i = static_cast<std::int64_t>(cur); nodes[i].parent >= 0; i = nodes[i].parent) {
                a.moves.push_back(nodes[i].move);
            }
            std::reverse(a.moves.begin(), a.moves.end());
            return a;
        }

        // enabled transitions in uid order
        const Sparse current = markings.at(mid);
        for (const auto& [p, c] : current) dense[p] = c;
        ++stamp;
        enabled.clear();
        auto consider = [&](std::uint32_t t) {
            if (seen[t] == stamp) return;
            seen[t] = stamp;
            for (auto p : transitions[t].inputs) {
                if (dense[p] == 0) return;
            }
            enabled.push_back(t);
        };
        for (const auto& [p, c] : current) {
            for (auto t : consumers[p]) consider(t);
        }
        for (auto t : sourceless) consider(t);
        std::sort(enabled.begin(), enabled.end());

        auto first = std::find_if(enabled.begin(), enabled.end(), [&](std::uint32_t t) {
            return inevitable[t] && (!transitions[t].visible || pos == n);
        });
        if (first != enabled.end()) {
            enabled = {*first};
        } else if (pos < n) {
            relax(mid, pos + 1, g + costs.log, lm + 1, static_cast<std::int64_t>(cur), Move{MoveKind::log, std::nullopt, pos});
        }

        for (auto tu : enabled) {
            const auto& t = transitions[tu];
            for (auto p : t.inputs) --dense[p];
            for (auto p : t.outputs) ++dense[p];
            Sparse next;
            next.reserve(current.size() + t.outputs.size());
            for (const auto& [p, c] : current) {
                if (dense[p]) next.emplace_back(p, dense[p]);
            }
            for (auto p : t.outputs) {
                bool listed = std::any_of(current.begin(), current.end(), [p](const auto& e) { return e.first == p; });
                if (!listed) next.emplace_back(p, dense[p]);
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            for (auto p : t.outputs) --dense[p];
            for (auto p : t.inputs) ++dense[p];
            const std::uint32_t next_id = markings.intern(std::move(next));

            if (t.visible) {
                if (pos < n && is_candidate[pos][t.uid]) {
                    relax(next_id, pos + 1, g + costs.sync, lm, static_cast<std::int64_t>(cur),
                          Move{MoveKind::synchronous, t.uid, pos});
                }
                relax(next_id, pos, g + costs.model, lm, static_cast<std::int64_t>(cur), Move{MoveKind::model, t.uid, std::nullopt});
            } else {
                relax(next_id, pos, g + costs.invisible, lm, static_cast<std::int64_t>(cur),
                      Move{MoveKind::invisible_model, t.uid, std::nullopt});
            }
        }
        for (const auto& [p, c] : current) dense[p] = 0;
    }
    throw ModelInfeasible("no final marking is reachable from the initial marking");
}

std::uint64_t empty_trace_cost(const PetriNet& net, const AlignmentCosts& costs, const SearchLimits& limits) {
    return align(net, {}, costs, limits).raw_cost;
}

MoveCounts count_moves(const Alignment& alignment) {
    MoveCounts c;
    for (const auto& m : alignment.moves) {
        switch (m.kind) {
            case MoveKind::synchronous: ++c.synchronous; break;
            case MoveKind::model: ++c.model; break;
            case MoveKind::log: ++c.log; break;
            case MoveKind::invisible_model: ++c.invisible; break;
        }
    }
    return c;
}

FitnessTriple fitness(const Alignment& alignment, std::uint64_t empty_cost, std::size_t trace_length,
                      const AlignmentCosts& costs) {
    auto ratio = [](std::size_t num, std::size_t den) { return den == 0 ? 1.0 : static_cast<double>(num) / den; };
    MoveCounts c = count_moves(alignment);
    FitnessTriple f;
    f.move_model = ratio(c.synchronous, c.synchronous + c.model);
    f.move_log = ratio(c.synchronous, c.synchronous + c.log);
    std::uint64_t max_cost = empty_cost + static_cast<std::uint64_t>(costs.log) * trace_length;
    f.trace = max_cost == 0 ? 1.0 : 1.0 - static_cast<double>(alignment.raw_cost) / static_cast<double>(max_cost);
    f.trace = std::clamp(f.trace, 0.0, 1.0);
    return f;
}

FitnessTriple fitness(const Alignment& alignment, const PetriNet& net, const MappedTrace& trace,
                      const AlignmentCosts& costs) {
    return fitness(alignment, empty_trace_cost(net, costs), trace.size(), costs);
}

}  // namespace procmine::conformance
