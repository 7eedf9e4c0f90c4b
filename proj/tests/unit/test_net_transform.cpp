#include <doctest.h>

#include <algorithm>

#include "generators.hpp"
#include "procmine/error.hpp"
#include "procmine/net_transform.hpp"
#include "procmine/tpn.hpp"

using namespace procmine;

namespace {

TemplateDocument doc_of(NodeList nodes, EndpointMap eps = {}) {
    TemplateDocument d;
    d.tree.root = std::move(nodes);
    d.endpoints = std::move(eps);
    return d;
}

std::vector<std::string> names(const PetriNet& net, const std::vector<PlaceIndex>& ps) {
    std::vector<std::string> out;
    for (auto p : ps) out.push_back(net.places()[p]);
    return out;
}

std::size_t invisible(const PetriNet& net) {
    return static_cast<std::size_t>(std::count_if(net.transitions().begin(), net.transitions().end(),
                                                  [](const Transition& t) { return !t.visible; }));
}

}  // namespace

TEST_CASE("one manipulate") {
    auto r = transform_to_net(doc_of({Node{Manipulate{"a1", "Init"}}}));
    CHECK(r.net.places() == std::vector<std::string>{"p0", "p1"});
    REQUIRE(r.net.transitions().size() == 1);
    const auto& t = r.net.transitions()[0];
    CHECK(t.name == "Init_a1");
    CHECK(names(r.net, t.inputs) == std::vector<std::string>{"p0"});
    CHECK(names(r.net, t.outputs) == std::vector<std::string>{"p1"});
    CHECK(r.origins[0].node_id == "a1");
    CHECK(r.origins[0].phase == Phase::single);

    auto net = finalize_net(r);
    REQUIRE(net.final_markings().size() == 1);
    CHECK(net.final_markings()[0] == net.single_token(1));
    CHECK(invisible(net) == 0);
    CHECK(emit_tpn(net) == "place p0 init 1;\nplace p1;\ntrans Init_a1\n  in p0\n  out p1;\n");
}

TEST_CASE("one call") {
    auto net = template_to_net(doc_of({Node{Call{"a2", "Fetch Data", "e1"}}}, {{"e1", "https://x/y"}}));
    CHECK(net.places().size() == 3);
    REQUIRE(net.transitions().size() == 2);
    CHECK(net.transitions()[0].name == "FetchData_a2_https://x/y_start");
    CHECK(net.transitions()[1].name == "FetchData_a2_https://x/y_complete");
    CHECK(net.transitions()[0].quoted);
    auto text = emit_tpn(net);
    CHECK(text.find("trans \"FetchData_a2_https://x/y_start\"\n  in p0\n  out p1;") != std::string::npos);
    CHECK(text.find("trans \"FetchData_a2_https://x/y_complete\"\n  in p1\n  out p2;") != std::string::npos);
}

TEST_CASE("parallel of two manipulates") {
    Parallel p;
    p.branches.push_back(ParallelBranch{{Node{Manipulate{"a1", "m1"}}}});
    p.branches.push_back(ParallelBranch{{Node{Manipulate{"a2", "m2"}}}});
    auto r = transform_to_net(doc_of({Node{p}}));
    CHECK(r.net.places().size() == 8);
    REQUIRE(r.net.transitions().size() == 6);
    const auto& ts = r.net.transitions();
    CHECK(ts[0].name == "x_parallel");
    CHECK(names(r.net, ts[0].outputs) == std::vector<std::string>{"p1", "p2"});
    CHECK(ts[1].name == "x_parallel_branch");
    CHECK(ts[2].name == "m1_a1");
    CHECK(ts[3].name == "x_parallel_branch");
    CHECK(ts[4].name == "m2_a2");
    CHECK(ts[5].name == "x_closing_parallel");
    CHECK(names(r.net, ts[5].inputs) == std::vector<std::string>{"p4", "p6"});
    CHECK(names(r.net, ts[5].outputs) == std::vector<std::string>{"p7"});

    auto net = finalize_net(r);
    CHECK(invisible(net) == 4);
    REQUIRE(net.final_markings().size() == 1);
    CHECK(net.final_markings()[0] == net.single_token(7));
}

TEST_CASE("terminate inside choose gives two final markings") {
    Choose c;
    c.branches.push_back(Branch{BranchKind::alternative, {Node{Manipulate{"a1", "A"}}, Node{Terminate{}}}});
    c.branches.push_back(Branch{BranchKind::otherwise, {Node{Manipulate{"a2", "B"}}}});
    auto r = transform_to_net(doc_of({Node{c}, Node{Manipulate{"a3", "C"}}}));
    auto net = finalize_net(r);
    CHECK(net.final_markings().size() == 2);
    CHECK(r.terminate_sinks.size() == 1);
    REQUIRE(r.main_end);
    // one x_alternative per branch, one closing helper (the terminating branch has none), one x_termination
    CHECK(invisible(net) == 4);
}

TEST_CASE("every path terminates") {
    auto r = transform_to_net(doc_of({Node{Manipulate{"a1", "A"}}, Node{Terminate{}}}));
    CHECK_FALSE(r.main_end);
    auto net = finalize_net(r);
    CHECK(net.final_markings().size() == 1);
}

TEST_CASE("transition counts follow the tree") {
    testing::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        auto doc = testing::random_template(rng);
        auto r = transform_to_net(doc);
        auto net = finalize_net(r);
        auto n = count_nodes(doc.tree);
        std::size_t visible = net.transitions().size() - invisible(net);
        REQUIRE(visible == 2 * n.calls + n.manipulates);
        for (const auto& t : net.transitions()) REQUIRE(t.visible != is_helper_name(t.name));
        // closing helpers only where the body or branch can finish without terminating
        std::size_t closing = 0, loop_back = 0, loop_open = 0;
        for (const auto& t : net.transitions()) {
            closing += t.name == "x_closing_decision";
            loop_back += t.name == "x_closing_loop";
            loop_open += t.name == "x_loop";
        }
        REQUIRE(loop_open == n.loops);
        REQUIRE(loop_back <= n.loops);
        REQUIRE(invisible(net) ==
                2 * n.parallels + n.parallel_branches + n.loops + loop_back + n.choose_branches + closing + n.terminates);
        REQUIRE(net.source_places().size() == 1);
        REQUIRE(net.initial_marking().total() == 1);
        REQUIRE(net.initial_marking().tokens[0] == 1);
    }
}

TEST_CASE("finalize a parsed net") {
    auto net = parse_tpn("place p0 init 1;\nplace p1;\nplace p2;\ntrans a\n  in p0\n  out p1;\n"
                         "trans x_skip\n  in p0\n  out p2;\n");
    auto fin = finalize_net(net);
    CHECK(fin.final_markings().size() == 2);
    CHECK(fin.transitions()[0].visible);
    CHECK_FALSE(fin.transitions()[1].visible);

    auto cyclic = parse_tpn("place p0 init 1;\ntrans a\n  in p0\n  out p0;\n");
    CHECK_THROWS_AS(finalize_net(cyclic), ValidationError);
}
