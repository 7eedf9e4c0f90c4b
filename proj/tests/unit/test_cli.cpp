#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "generators.hpp"
#include "procmine/cli.hpp"
#include "procmine/error.hpp"
#include "procmine/io.hpp"
#include "procmine/net_transform.hpp"
#include "procmine/template_parser.hpp"
#include "procmine/tpn.hpp"
#include "procmine/xes.hpp"

using namespace procmine;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("procmine_cli_" + tag + "_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

TemplateDocument sample_template() {
    TemplateDocument d;
    d.endpoints["e"] = "https://x/y";
    d.tree.root.push_back(Node{Manipulate{"a1", "Init"}});
    d.tree.root.push_back(Node{Call{"a2", "Fetch Data?", "e"}});
    return d;
}

}  // namespace

TEST_CASE("help and usage errors") {
    auto help = run({"--help"});
    CHECK(help.code == 0);
    for (auto cmd : {"to-tpn", "yaml-to-xes", "extract-csv", "conformance", "cluster", "classify", "rfe", "stats", "report"})
        CHECK(help.out.find(cmd) != std::string::npos);

    auto bad = run({"to-tpn", "--bogus"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("Usage") != std::string::npos);
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"--jobs", "0", "stats", "--measurements", "x"}).code == 1);
}

TEST_CASE("to-tpn") {
    TempDir dir("tpn");
    auto doc = sample_template();
    write_file_atomic(dir / "tpl.xml", write_template(doc));
    auto r = run({"to-tpn", dir / "tpl.xml", dir / "out.tpn"});
    CHECK(r.code == 0);
    REQUIRE(fs::exists(dir / "out.tpn"));
    CHECK(read_file(dir / "out.tpn") == emit_tpn(template_to_net(doc)));

    auto missing = run({"to-tpn", dir / "nope.xml", dir / "x.tpn"});
    CHECK(missing.code == 1);
    write_file_atomic(dir / "broken.xml", "<testset><description>");
    auto broken = run({"to-tpn", dir / "broken.xml", dir / "y.tpn"});
    CHECK(broken.code == 1);
    CHECK_FALSE(broken.err.empty());
    CHECK_FALSE(fs::exists(dir / "y.tpn"));
}

TEST_CASE("conformance") {
    TempDir dir("conf");
    auto doc = sample_template();
    write_file_atomic(dir / "good.xml", write_template(doc));
    testing::Rng rng(1);
    logs::XesDocument xes = logs::build_xes({});
    for (int i = 0; i < 4; ++i) {
        auto t = testing::play(doc, rng);
        t.attributes.push_back({"string", "concept:name", "t" + std::to_string(i)});
        xes.traces.push_back(t);
    }
    write_file_atomic(dir / "log.xes", logs::serialize_xes(xes));

    auto ok = run({"conformance", "--log", dir / "log.xes", "-t", dir / "good.xml", "-o", dir / "fit.csv"});
    CHECK(ok.code == 0);
    REQUIRE(fs::exists(dir / "fit.csv"));
    CHECK(read_file(dir / "fit.csv").find(",1,1,1,") != std::string::npos);

    // the only sink has no incoming arc, so no final marking is reachable
    write_file_atomic(dir / "bad.tpn", "place p0 init 1;\nplace p1;\nplace p2;\ntrans a\n  in p0\n  out p1;\n"
                                       "trans b\n  in p1\n  out p1;\n");
    auto bad = run({"conformance", "--log", dir / "log.xes", "-t", dir / "good.xml", "-t", dir / "bad.tpn", "-o",
                    dir / "fit2.csv"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("model infeasible") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "fit2.csv"));
}

TEST_CASE("outputs carry a manifest") {
    TempDir dir("manifest");
    write_file_atomic(dir / "tpl.xml", write_template(sample_template()));
    REQUIRE(run({"to-tpn", dir / "tpl.xml", dir / "out.tpn"}).code == 0);
    nlohmann::json found;
    for (const auto& e : fs::directory_iterator(dir.path)) {
        if (e.path().extension() == ".json") found = nlohmann::json::parse(read_file(e.path()));
    }
    REQUIRE_FALSE(found.is_null());
    CHECK(found.dump().find(cli::sha256_hex(read_file(dir / "tpl.xml"))) != std::string::npos);
}

TEST_CASE("stats on a small measuring file") {
    TempDir dir("stats");
    write_file_atomic(dir / "m.csv", "Teil*MM1*MM2*MM3*A*B*C*D\n1*TRUE*TRUE*TRUE*TRUE*TRUE*TRUE*TRUE\n"
                                     "2*FALSE*TRUE*TRUE*TRUE*TRUE*TRUE*FALSE\n");
    auto r = run({"stats", "--measurements", dir / "m.csv", "-o", dir / "stats.csv"});
    CHECK(r.code == 0);
    auto text = read_file(dir / "stats.csv");
    CHECK(text.find("MM1,1,1,0") != std::string::npos);
    CHECK(run({"stats", "--measurements", dir / "m.csv", "--shift", "1:2", "-o", dir / "s2.csv"}).code == 1);
}

TEST_CASE("scenario presets") {
    auto s1 = cli::scenario_preset("scenario1");
    CHECK(s1.min_points == 100);
    CHECK(s1.inclusive);
    REQUIRE(s1.windows.size() == 1);
    CHECK(s1.windows[0] == analytics::WindowPosition::last);
    CHECK(s1.window_k == 10);
    CHECK_FALSE(s1.shift);

    auto s2 = cli::scenario_preset("scenario2");
    CHECK(s2.min_points == 100);
    CHECK(s2.window_k == 5);
    CHECK(s2.min_occurrence == 10);
    CHECK(s2.windows.size() == 3);
    REQUIRE(s2.shift);
    CHECK(s2.shift->from == 129);
    CHECK(s2.shift->to == 180);
    CHECK(s2.shift->offset == 2);

    CHECK_THROWS_AS(cli::scenario_preset("scenario3"), ValidationError);
    CHECK(run({"report", "--preset", "scenario3"}).code == 1);
}

TEST_CASE("sha256") {
    CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
