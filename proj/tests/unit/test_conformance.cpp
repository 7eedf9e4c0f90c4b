#include <doctest.h>

#include "generators.hpp"
#include "procmine/conformance.hpp"
#include "procmine/error.hpp"
#include "procmine/net_transform.hpp"
#include "procmine/tpn.hpp"

using namespace procmine;
using namespace procmine::conformance;
using logs::make_event;
using logs::XesTrace;

namespace {

const std::string kUrl = "https://x/y";

PetriNet one_call() {
    TemplateDocument d;
    d.tree.root.push_back(Node{Call{"a1", "Fetch Data", "e"}});
    d.endpoints["e"] = kUrl;
    return template_to_net(d);
}

logs::XesEvent ev(const std::string& label, bool start, const std::string& url = kUrl) {
    return make_event(label, url, "a1", start ? "start" : "complete", start ? "activity/calling" : "activity/done",
                      "2020-01-01T00:00:00");
}

XesTrace trace_of(std::vector<logs::XesEvent> events, const std::string& name = "t") {
    XesTrace t;
    t.attributes.push_back({"string", "concept:name", name});
    t.events = std::move(events);
    return t;
}

}  // namespace

TEST_CASE("transition names") {
    auto k = parse_transition_name("DetectLowerhousingProductionStart_a1_https://centurio.work/flow/start/url/_start");
    CHECK(k.kind == TransitionKey::Kind::call);
    CHECK(k.label == "DetectLowerhousingProductionStart");
    CHECK(k.id == "a1");
    CHECK(k.url == "https://centurio.work/flow/start/url/");
    CHECK(k.phase == "start");

    auto m = parse_transition_name("Init_a12");
    CHECK(m.kind == TransitionKey::Kind::manipulate);
    CHECK(m.label == "Init");
    CHECK(m.id == "a12");

    CHECK(parse_transition_name("x_alternative").kind == TransitionKey::Kind::other);
    CHECK(parse_transition_name("plain").kind == TransitionKey::Kind::other);
    CHECK(parse_mapping_kind("endpoint") == MappingKind::endpoint);
    CHECK_THROWS_AS(parse_mapping_kind("both"), ValidationError);
}

TEST_CASE("label and endpoint mapping") {
    auto net = parse_tpn("place p0 init 1;\nplace p1;\nplace p2;\nplace p3;\n"
                         "trans \"DetectLowerhousingProductionStart_a1_https://centurio.work/flow/start/url/_start\"\n"
                         "  in p0\n  out p1;\n"
                         "trans \"Other_a2_https://centurio.work/flow/start/url/_start\"\n  in p1\n  out p2;\n"
                         "trans \"Other_a2_https://centurio.work/flow/start/url/_complete\"\n  in p2\n  out p3;\n");
    auto t = trace_of({ev("Detect Lowerhousing Production Start", true, "https://centurio.work/flow/start/url/"),
                       ev("Unknown", true, "https://nowhere/")});
    auto by_label = map_trace(t, MappingKind::label, net);
    CHECK(by_label[0].candidates == std::vector<TransitionUid>{0});
    CHECK(by_label[1].candidates.empty());

    auto by_ep = map_trace(t, MappingKind::endpoint, net);
    CHECK(by_ep[0].candidates == std::vector<TransitionUid>{0, 1});
    CHECK(by_ep[1].candidates.empty());
}

TEST_CASE("one-call alignments") {
    auto net = one_call();
    auto cost = [&](std::vector<logs::XesEvent> es) {
        auto mt = map_trace(trace_of(std::move(es)), MappingKind::label, net);
        return std::make_pair(align(net, mt), mt);
    };
    SUBCASE("perfect") {
        auto [a, mt] = cost({ev("Fetch Data", true), ev("Fetch Data", false)});
        CHECK(a.raw_cost == 0);
        REQUIRE(a.moves.size() == 2);
        CHECK(a.moves[0].kind == MoveKind::synchronous);
        CHECK(a.moves[1].kind == MoveKind::synchronous);
        auto f = fitness(a, net, mt);
        CHECK(f.move_model == 1.0);
        CHECK(f.move_log == 1.0);
        CHECK(f.trace == 1.0);
    }
    SUBCASE("missing complete") {
        auto [a, mt] = cost({ev("Fetch Data", true)});
        CHECK(a.raw_cost == 1);
        REQUIRE(a.moves.size() == 2);
        CHECK(a.moves[0].kind == MoveKind::synchronous);
        CHECK(a.moves[1].kind == MoveKind::model);
        auto f = fitness(a, net, mt);
        CHECK(f.move_model == doctest::Approx(0.5));
        CHECK(f.move_log == doctest::Approx(1.0));
        CHECK(f.trace == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("trailing extra start") {
        auto [a, mt] = cost({ev("Fetch Data", true), ev("Fetch Data", false), ev("Fetch Data", true)});
        CHECK(a.raw_cost == 1);
        CHECK(a.moves.back().kind == MoveKind::log);
        CHECK(a.moves.back().event == std::optional<std::size_t>(2));
    }
    SUBCASE("empty trace") {
        auto [a, mt] = cost({});
        CHECK(a.raw_cost == 2);
        CHECK(empty_trace_cost(net) == 2);
        auto f = fitness(a, net, mt);
        CHECK(f.move_model == 0.0);
        CHECK(f.move_log == 1.0);
        CHECK(f.trace == 0.0);
    }
}

TEST_CASE("infeasible and limited searches") {
    auto net = parse_tpn("place p0 init 1;\nplace p1;\nplace p2;\ntrans a\n  in p0\n  out p1;\n");
    net.add_final_marking(net.single_token(2));
    CHECK_THROWS_AS(align(net, {}), ModelInfeasible);

    testing::Rng rng(1);
    TemplateDocument d;
    Parallel p;
    for (int b = 0; b < 4; ++b) {
        ParallelBranch pb;
        for (int i = 0; i < 6; ++i) pb.children.push_back(Node{Manipulate{"a" + std::to_string(b * 10 + i), "T"}});
        p.branches.push_back(pb);
    }
    d.tree.root.push_back(Node{p});
    auto big = template_to_net(d);
    MappedTrace junk(12);
    CHECK_THROWS_AS(align(big, junk, {}, SearchLimits{50}), Error);
}

TEST_CASE("alignment matches the exhaustive oracle") {
    testing::Rng rng(2024);
    for (int n = 0; n < 40; ++n) {
        auto net = testing::random_net(rng, 6);
        for (int k = 0; k < 25; ++k) {
            auto mt = testing::map_labels(net, testing::random_labels(rng, net, 6));
            auto expect = testing::ucs_cost(net, mt);
            if (!expect) {
                REQUIRE_THROWS_AS(align(net, mt), ModelInfeasible);
                continue;
            }
            auto a = align(net, mt);
            REQUIRE(a.raw_cost == *expect);
            // replay the model side and check the log side
            auto m = net.initial_marking();
            std::size_t next_event = 0;
            for (const auto& mv : a.moves) {
                if (mv.event) REQUIRE(*mv.event == next_event++);
                if (mv.transition) {
                    const auto& t = net.transitions()[*mv.transition];
                    REQUIRE(net.enabled(m, t));
                    m = net.fire(m, t);
                }
            }
            REQUIRE(next_event == mt.size());
            REQUIRE(net.is_final(m));

            auto f = fitness(a, net, mt);
            for (double v : {f.move_model, f.move_log, f.trace}) REQUIRE((v >= 0.0 && v <= 1.0));
            REQUIRE((f.trace == 1.0) == (a.raw_cost == 0));

            // one more unmappable event costs exactly one more
            auto longer = mt;
            longer.push_back(MappedEvent{{}, "junk"});
            auto b = align(net, longer);
            REQUIRE(b.raw_cost == a.raw_cost + 1);
            REQUIRE(fitness(b, net, longer).move_log <= f.move_log);
        }
    }
}

TEST_CASE("fitness formula") {
    Alignment a;
    a.raw_cost = 3;
    a.moves = {Move{MoveKind::synchronous, 0, 0}, Move{MoveKind::model, 1, std::nullopt},
               Move{MoveKind::invisible_model, 2, std::nullopt}, Move{MoveKind::log, std::nullopt, 1},
               Move{MoveKind::log, std::nullopt, 2}};
    auto c = count_moves(a);
    CHECK(c.synchronous == 1);
    CHECK(c.model == 1);
    CHECK(c.invisible == 1);
    CHECK(c.log == 2);
    auto f = fitness(a, 4, 3);
    CHECK(f.move_model == doctest::Approx(0.5));
    CHECK(f.move_log == doctest::Approx(1.0 / 3.0));
    CHECK(f.trace == doctest::Approx(1.0 - 3.0 / 7.0));
    auto zero = fitness(Alignment{}, 0, 0);
    CHECK(zero.trace == 1.0);
    CHECK(zero.move_model == 1.0);
}

TEST_CASE("fitness table groups identical traces") {
    auto net = one_call();
    logs::XesDocument x;
    for (int i = 0; i < 3; ++i) x.traces.push_back(trace_of({ev("Fetch Data", true), ev("Fetch Data", false)}, "s" + std::to_string(i)));
    x.traces.push_back(trace_of({ev("Fetch Data", true)}, "odd"));

    TemplateDocument other;
    other.tree.root.push_back(Node{Manipulate{"a1", "Something"}});
    std::vector<NamedNet> templates{{"call", net}, {"manip", template_to_net(other)}};

    auto table = build_fitness_table(x, templates);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].multiplicity == 3);
    CHECK(table.rows[0].members == std::vector<std::string>{"s0", "s1", "s2"});
    CHECK(table.rows[1].multiplicity == 1);
    for (const auto& row : table.rows) {
        CHECK(row.argmax[kMoveLog] == std::vector<std::size_t>{0});
        CHECK(row.argmax[kTrace] == std::vector<std::size_t>{0});
        auto as = assign_template(row);
        CHECK(as.template_index == std::optional<std::size_t>(0));
        CHECK_FALSE(as.conflict);
    }

    TableOptions par;
    par.jobs = 4;
    CHECK(fitness_table_csv(build_fitness_table(x, templates, par)) == fitness_table_csv(table));
    auto csv = fitness_table_csv(table);
    CHECK(csv.rfind("group_id,multiplicity,call_move_model,call_move_log,call_trace,manip_move_model", 0) == 0);
}

TEST_CASE("infeasible template becomes a missing cell") {
    auto bad = parse_tpn("place p0 init 1;\nplace p1;\nplace p2;\ntrans a\n  in p0\n  out p1;\n");
    bad.add_final_marking(bad.single_token(2));
    logs::XesDocument x;
    x.traces.push_back(trace_of({ev("Fetch Data", true), ev("Fetch Data", false)}));
    auto table = build_fitness_table(x, {{"good", one_call()}, {"bad", bad}});
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].cells[0]);
    CHECK_FALSE(table.rows[0].cells[1]);
    CHECK_FALSE(table.warnings.empty());
}

TEST_CASE("assign_template") {
    auto row_of = [](std::vector<std::optional<FitnessTriple>> cells, std::vector<std::size_t> ml,
                     std::vector<std::size_t> tr) {
        FitnessRow r;
        r.cells = std::move(cells);
        r.argmax[kMoveLog] = std::move(ml);
        r.argmax[kTrace] = std::move(tr);
        return r;
    };
    SUBCASE("clear winner") {
        auto a = assign_template(row_of({FitnessTriple{0.2, 0, 0}, FitnessTriple{0.5, 1, 1}, FitnessTriple{0.1, 0, 0}}, {1}, {1}));
        CHECK(a.template_index == std::optional<std::size_t>(1));
        CHECK_FALSE(a.conflict);
        CHECK_FALSE(a.tie);
    }
    SUBCASE("metrics disagree") {
        auto a = assign_template(row_of({FitnessTriple{1, 0.9, 0.5}, FitnessTriple{1, 0.6, 0.7}}, {0}, {1}));
        CHECK(a.conflict);
        CHECK(a.template_index == std::optional<std::size_t>(0));
    }
    SUBCASE("single template") {
        auto a = assign_template(row_of({FitnessTriple{0.3, 0.3, 0.3}}, {0}, {0}));
        CHECK(a.template_index == std::optional<std::size_t>(0));
    }
    SUBCASE("tie goes to the lower index") {
        auto a = assign_template(row_of({FitnessTriple{1, 1, 1}, FitnessTriple{1, 1, 1}}, {0, 1}, {0, 1}));
        CHECK(a.template_index == std::optional<std::size_t>(0));
        CHECK(a.tie);
    }
    SUBCASE("nothing to assign") {
        auto a = assign_template(row_of({std::nullopt, std::nullopt}, {}, {}));
        CHECK_FALSE(a.template_index);
    }
}

TEST_CASE("simulated traces fit their own template") {
    testing::Rng rng(8);
    for (int i = 0; i < 30; ++i) {
        auto doc = testing::random_template(rng);
        auto net = template_to_net(doc);
        auto empty = empty_trace_cost(net);
        for (int k = 0; k < 5; ++k) {
            auto t = testing::play(doc, rng);
            auto mt = map_trace(t, MappingKind::label, net);
            auto a = align(net, mt);
            REQUIRE(a.raw_cost == 0);
            auto f = fitness(a, empty, mt.size());
            REQUIRE(f.trace == 1.0);
            REQUIRE(f.move_model == 1.0);
        }
    }
}
