#include "procmine/net_transform.hpp"

#include "procmine/error.hpp"
#include "procmine/overloaded.hpp"

namespace procmine {

namespace {

class Transformer {
public:
    explicit Transformer(const TemplateDocument& doc) : doc_(doc) {}

    TransformResult run() {
        validate(doc_.tree);
        PlaceIndex start = place();
        out_.net.set_initial_tokens(start, 1);
        out_.main_end = sequence(doc_.tree.root, start);
        return std::move(out_);
    }

private:
    using Flow = std::optional<PlaceIndex>;

    PlaceIndex place() { return out_.net.add_place("p" + std::to_string(next_place_++)); }

    void transition(std::string name, std::vector<PlaceIndex> in, std::vector<PlaceIndex> out, TransitionOrigin origin,
                    bool quoted = false) {
        out_.net.add_transition(std::move(name), std::move(in), std::move(out), quoted);
        out_.origins.push_back(std::move(origin));
    }

    void helper(const char* name, std::vector<PlaceIndex> in, std::vector<PlaceIndex> out) {
        transition(name, std::move(in), std::move(out), TransitionOrigin{});
    }

    Flow sequence(const NodeList& nodes, Flow cur) {
        for (const auto& n : nodes) {
            if (!cur) throw ValidationError("element after a construct whose every path terminates is unreachable");
            cur = node(n, *cur);
        }
        return cur;
    }

    Flow node(const Node& n, PlaceIndex cur) {
        return std::visit(
            overloaded{
                [&](const Call& c) -> Flow {
                    const auto& url = doc_.endpoints.at(c.endpoint);
                    std::string stem = clean_label(c.label) + "_" + c.id + "_" + url;
                    PlaceIndex mid = place();
                    transition(stem + "_start", {cur}, {mid}, {c.id, Phase::start}, true);
                    PlaceIndex end = place();
                    transition(stem + "_complete", {mid}, {end}, {c.id, Phase::complete}, true);
                    return end;
                },
                [&](const Manipulate& m) -> Flow {
                    PlaceIndex end = place();
                    transition(clean_label(m.label) + "_" + m.id, {cur}, {end}, {m.id, Phase::single});
                    return end;
                },
                [&](const Terminate&) -> Flow {
                    PlaceIndex sink = place();
                    helper("x_termination", {cur}, {sink});
                    out_.terminate_sinks.push_back(sink);
                    return std::nullopt;
                },
                [&](const Loop& l) -> Flow {
                    PlaceIndex body_start = place();
                    helper("x_loop", {cur}, {body_start});
                    Flow body_end = sequence(l.children, body_start);
                    if (!body_end) return std::nullopt;
                    helper("x_closing_loop", {*body_end}, {body_start});
                    return body_end;
                },
                [&](const Choose& ch) -> Flow {
                    std::vector<PlaceIndex> ends;
                    for (const auto& b : ch.branches) {
                        PlaceIndex branch_start = place();
                        helper("x_alternative", {cur}, {branch_start});
                        if (Flow end = sequence(b.children, branch_start)) ends.push_back(*end);
                    }
                    if (ends.empty()) return std::nullopt;
                    PlaceIndex merge = place();
                    for (auto e : ends) helper("x_closing_decision", {e}, {merge});
                    return merge;
                },
                [&](const Parallel& p) -> Flow {
                    std::vector<PlaceIndex> forks;
                    for (std::size_t i = 0; i < p.branches.size(); ++i) forks.push_back(place());
                    helper("x_parallel", {cur}, forks);
                    std::vector<PlaceIndex> ends;
                    for (std::size_t i = 0; i < p.branches.size(); ++i) {
                        PlaceIndex branch_start = place();
                        helper("x_parallel_branch", {forks[i]}, {branch_start});
                        Flow end = sequence(p.branches[i].children, branch_start);
                        if (!end) throw ValidationError("terminate inside a parallel branch is not supported");
                        ends.push_back(*end);
                    }
                    PlaceIndex join = place();
                    helper("x_closing_parallel", ends, {join});
                    return join;
                },
            },
            n.kind);
    }

    const TemplateDocument& doc_;
    TransformResult out_;
    std::size_t next_place_ = 0;
};

void hide_helpers(PetriNet& net) {
    for (auto& t : net.transitions()) t.visible = !is_helper_name(t.name);
}

}  // namespace

TransformResult transform_to_net(const TemplateDocument& doc) { return Transformer(doc).run(); }

PetriNet finalize_net(const TransformResult& result) {
    PetriNet net = result.net;
    hide_helpers(net);
    net.clear_final_markings();
    if (result.main_end) net.add_final_marking(net.single_token(*result.main_end));
    for (auto sink : result.terminate_sinks) net.add_final_marking(net.single_token(sink));
    if (net.final_markings().empty()) throw ValidationError("net has no sink place");
    return net;
}

PetriNet finalize_net(PetriNet net) {
    hide_helpers(net);
    net.clear_final_markings();
    for (auto sink : net.sink_places()) net.add_final_marking(net.single_token(sink));
    if (net.final_markings().empty()) throw ValidationError("net has no sink place (cyclic end)");
    return net;
}

PetriNet template_to_net(const TemplateDocument& doc) { return finalize_net(transform_to_net(doc)); }

}  // namespace procmine
