// One line per acceptance criterion: PASS, FAIL or SKIP plus the measured numbers.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

#include "generators.hpp"
#include "procmine/analytics/clustering.hpp"
#include "procmine/analytics/features.hpp"
#include "procmine/analytics/labels.hpp"
#include "procmine/analytics/models.hpp"
#include "procmine/cli.hpp"
#include "procmine/conformance.hpp"
#include "procmine/error.hpp"
#include "procmine/io.hpp"
#include "procmine/machining.hpp"
#include "procmine/net_transform.hpp"
#include "procmine/tpn.hpp"
#include "procmine/xes.hpp"
#include "procmine/yaml_log.hpp"

namespace fs = std::filesystem;
using namespace procmine;
using namespace procmine::testing;
namespace an = procmine::analytics;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
    Status status;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 2) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("procmine_acceptance_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int rc = cli::run(args, out, err);
    if (err_text) *err_text = err.str();
    return rc;
}

Outcome transformation_correctness() {
    auto t0 = Clock::now();
    Rng rng(20240501);
    std::size_t traces = 0, bad = 0;
    TreeCounts kinds;
    std::string first_problem;
    for (int i = 0; i < 200; ++i) {
        auto doc = random_template(rng);
        auto c = count_nodes(doc.tree);
        kinds.calls += c.calls;
        kinds.manipulates += c.manipulates;
        kinds.terminates += c.terminates;
        kinds.loops += c.loops;
        kinds.chooses += c.chooses;
        kinds.parallels += c.parallels;
        auto net = template_to_net(doc);
        for (int j = 0; j < 10; ++j) {
            auto trace = play(doc, rng);
            auto mapped = conformance::map_trace(trace, conformance::MappingKind::label, net);
            ++traces;
            try {
                auto a = conformance::align(net, mapped);
                auto f = conformance::fitness(a, net, mapped);
                if (a.raw_cost != 0 || f.move_model != 1.0 || f.move_log != 1.0 || f.trace != 1.0) {
                    ++bad;
                    if (first_problem.empty()) first_problem = "tree " + std::to_string(i) + " cost " + std::to_string(a.raw_cost);
                }
            } catch (const std::exception& ex) {
                ++bad;
                if (first_problem.empty()) first_problem = "tree " + std::to_string(i) + ": " + ex.what();
            }
        }
    }
    double secs = seconds_since(t0);
    bool all_kinds = kinds.calls && kinds.manipulates && kinds.terminates && kinds.loops && kinds.chooses && kinds.parallels;
    std::string detail = std::to_string(traces - bad) + "/" + std::to_string(traces) + " traces cost 0, fitness (1,1,1); " +
                         fmt(secs) + " s; kinds: " + std::to_string(kinds.calls) + " call " +
                         std::to_string(kinds.manipulates) + " manipulate " + std::to_string(kinds.loops) + " loop " +
                         std::to_string(kinds.chooses) + " choose " + std::to_string(kinds.parallels) + " parallel " +
                         std::to_string(kinds.terminates) + " terminate";
    if (!first_problem.empty()) detail += "; first failure: " + first_problem;
    return {bad == 0 && secs < 60 && all_kinds ? Status::pass : Status::fail, detail};
}

Outcome alignment_optimality() {
    auto t0 = Clock::now();
    Rng rng(77);
    std::size_t cases = 0, mismatch = 0, infeasible = 0;
    std::string first;
    for (int n = 0; n < 100; ++n) {
        auto net = random_net(rng, 8);
        for (int t = 0; t < 100; ++t) {
            auto mapped = map_labels(net, random_labels(rng, net, 8));
            auto oracle = ucs_cost(net, mapped);
            std::optional<std::uint64_t> astar;
            try {
                astar = conformance::align(net, mapped).raw_cost;
            } catch (const ModelInfeasible&) {
            }
            ++cases;
            if (!oracle) ++infeasible;
            if (astar != oracle) {
                ++mismatch;
                if (first.empty()) {
                    first = "net " + std::to_string(n) + " trace " + std::to_string(t) + ": A* " +
                            (astar ? std::to_string(*astar) : "none") + " vs " + (oracle ? std::to_string(*oracle) : "none");
                }
            }
        }
    }
    double secs = seconds_since(t0);
    std::string detail = std::to_string(cases - mismatch) + "/" + std::to_string(cases) + " costs equal the uniform-cost oracle (" +
                         std::to_string(infeasible) + " infeasible); " + fmt(secs) + " s";
    if (!first.empty()) detail += "; first mismatch: " + first;
    return {mismatch == 0 && secs < 120 ? Status::pass : Status::fail, detail};
}

Outcome tpn_codec() {
    Rng rng(3);
    std::size_t ok = 0;
    for (int i = 0; i < 500; ++i) {
        auto net = random_net(rng, 8);
        for (auto& t : net.transitions()) {
            if (chance(rng, 0.3)) {
                t.name = "Fetch Data_a" + std::to_string(t.uid) + "_https://x/y_start";
                t.quoted = true;
            }
        }
        if (chance(rng, 0.3)) net.set_initial_tokens(static_cast<PlaceIndex>(net.places().size() - 1), 3);
        auto back = parse_tpn(emit_tpn(net));
        bool same = same_structure(net, back);
        for (std::size_t k = 0; same && k < net.transitions().size(); ++k) {
            same = net.transitions()[k].quoted == back.transitions()[k].quoted;
        }
        ok += same;
    }

    TemplateDocument call;
    call.tree.root = {Node{Call{"a2", "Fetch Data", "e1"}}};
    call.endpoints["e1"] = "https://x/y";
    const std::string call_expected =
        "place p0 init 1;\nplace p1;\nplace p2;\n"
        "trans \"FetchData_a2_https://x/y_start\"\n  in p0\n  out p1;\n"
        "trans \"FetchData_a2_https://x/y_complete\"\n  in p1\n  out p2;\n";

    TemplateDocument par;
    Parallel p;
    p.branches.push_back(ParallelBranch{{Node{Manipulate{"a1", "m1"}}}});
    p.branches.push_back(ParallelBranch{{Node{Manipulate{"a2", "m2"}}}});
    par.tree.root = {Node{p}};
    const std::string par_expected =
        "place p0 init 1;\nplace p1;\nplace p2;\nplace p3;\nplace p4;\nplace p5;\nplace p6;\nplace p7;\n"
        "trans x_parallel\n  in p0\n  out p1, p2;\n"
        "trans x_parallel_branch\n  in p1\n  out p3;\n"
        "trans m1_a1\n  in p3\n  out p4;\n"
        "trans x_parallel_branch\n  in p2\n  out p5;\n"
        "trans m2_a2\n  in p5\n  out p6;\n"
        "trans x_closing_parallel\n  in p4, p6\n  out p7;\n";

    auto call_net = transform_to_net(call).net;
    auto par_result = transform_to_net(par);
    bool call_ok = renumber_places(emit_tpn(call_net)) == renumber_places(call_expected);
    bool par_ok = renumber_places(emit_tpn(par_result.net)) == renumber_places(par_expected);
    auto fin = finalize_net(par_result);
    std::size_t invisible = 0;
    for (const auto& t : fin.transitions()) invisible += !t.visible;
    bool final_ok = fin.final_markings().size() == 1 && fin.final_markings()[0].total() == 1 &&
                    invisible == 4 && par_result.net.places().size() == 8;

    std::string detail = std::to_string(ok) + "/500 random nets round-trip; call fixture " + (call_ok ? "matches" : "differs") +
                         "; parallel fixture " + (par_ok ? "matches" : "differs") + " (" +
                         std::to_string(invisible) + " invisible, " + std::to_string(fin.final_markings().size()) +
                         " final marking)";
    return {ok == 500 && call_ok && par_ok && final_ok ? Status::pass : Status::fail, detail};
}

std::vector<TemplateDocument> identification_templates() {
    EndpointMap ep{{"ep1", "https://lab.example/fetch"}, {"ep2", "https://lab.example/check"},
                   {"ep3", "https://lab.example/measure"}};
    TemplateDocument t1, t2, t3;
    t1.endpoints = t2.endpoints = t3.endpoints = ep;
    t1.tree.root = {Node{Call{"a1", "Fetch", "ep1"}}, Node{Manipulate{"a2", "Mill"}}, Node{Call{"a3", "Check", "ep2"}},
                    Node{Manipulate{"a4", "Store"}}};
    Parallel p;
    p.branches.push_back(ParallelBranch{{Node{Manipulate{"a2", "Drill"}}}});
    p.branches.push_back(ParallelBranch{{Node{Call{"a3", "Measure", "ep3"}}}});
    t2.tree.root = {Node{Call{"a1", "Fetch", "ep1"}}, Node{p}, Node{Manipulate{"a4", "Store"}}};
    Loop l;
    l.children = {Node{Manipulate{"a1", "Load Part"}}, Node{Call{"a2", "Check", "ep2"}}};
    Choose c;
    c.branches.push_back(Branch{BranchKind::alternative, {Node{Manipulate{"a3", "Mill"}}}});
    c.branches.push_back(Branch{BranchKind::otherwise, {Node{Manipulate{"a4", "Drill"}}}});
    t3.tree.root = {Node{l}, Node{c}};
    return {t1, t2, t3};
}

Outcome template_identification() {
    auto templates = identification_templates();
    std::vector<conformance::NamedNet> nets;
    for (std::size_t i = 0; i < templates.size(); ++i) nets.push_back({"T" + std::to_string(i + 1), template_to_net(templates[i])});

    Rng rng(4242);
    logs::XesDocument xes = logs::build_xes({});
    std::map<std::string, std::pair<std::size_t, bool>> truth;  // trace -> (template, noisy)
    for (std::size_t k = 0; k < templates.size(); ++k) {
        for (int i = 0; i < 50; ++i) {
            auto trace = play(templates[k], rng);
            bool noisy = i % 10 == 0;
            if (noisy) trace = add_noise(trace, rng);
            std::string name = "T" + std::to_string(k + 1) + "-" + std::to_string(i);
            trace.attributes.push_back({"string", "concept:name", name});
            truth[name] = {k, noisy};
            xes.traces.push_back(std::move(trace));
        }
    }
    conformance::TableOptions opt;
    opt.jobs = 4;
    auto table = conformance::build_fitness_table(xes, nets, opt);
    std::size_t clean = 0, recovered = 0, noisy = 0, noisy_recovered = 0, conflicts = 0, flag_errors = 0;
    for (const auto& row : table.rows) {
        auto a = conformance::assign_template(row);
        std::set<std::size_t> log_max(row.argmax[conformance::kMoveLog].begin(), row.argmax[conformance::kMoveLog].end());
        bool overlap = false;
        for (auto t : row.argmax[conformance::kTrace]) overlap = overlap || log_max.count(t);
        if (a.conflict != !overlap) ++flag_errors;
        conflicts += a.conflict;
        for (const auto& m : row.members) {
            auto [k, is_noisy] = truth.at(m);
            bool hit = a.template_index && *a.template_index == k;
            if (is_noisy) {
                ++noisy;
                noisy_recovered += hit;
            } else {
                ++clean;
                recovered += hit;
            }
        }
    }
    double rate = clean ? static_cast<double>(recovered) / static_cast<double>(clean) : 0.0;
    std::string detail = "noiseless " + std::to_string(recovered) + "/" + std::to_string(clean) + " (" + fmt(100 * rate, 1) +
                         "%), noisy " + std::to_string(noisy_recovered) + "/" + std::to_string(noisy) + "; " +
                         std::to_string(conflicts) + " conflicts, " + std::to_string(flag_errors) + " flag errors";
    return {rate >= 0.95 && flag_errors == 0 ? Status::pass : Status::fail, detail};
}

Outcome xes_structure() {
    auto dir = scratch("xes");
    auto s1 = write_scenario1(dir, 5);
    // oracle: count lifecycle lines in the raw YAML text
    std::size_t expected = 0;
    for (const auto& e : fs::directory_iterator(s1.yaml_dir)) {
        std::istringstream in(read_file(e.path()));
        for (std::string line; std::getline(in, line);) {
            if (line == "  cpee:lifecycle:transition: activity/calling" || line == "  cpee:lifecycle:transition: activity/done") {
                ++expected;
            }
        }
    }
    auto out = dir / "logs.xes";
    std::string err;
    int rc = cli({"yaml-to-xes", s1.yaml_dir.string(), "--out", out.string()}, &err);
    if (rc != 0) return {Status::fail, "yaml-to-xes exit " + std::to_string(rc) + ": " + err};
    auto text = read_file(out);
    auto doc = logs::parse_xes(text);
    std::size_t events = 0;
    for (const auto& t : doc.traces) events += t.events.size();
    bool endpoint = false;
    for (const auto& c : doc.classifiers) {
        endpoint = endpoint || (c.name == "CPEE Endpoint" && c.keys == "cpee:endpoint cpee:lifecycle:transition");
    }
    auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
        return n;
    };
    bool ok = doc.extensions.size() == 4 && doc.global_trace.size() == 2 && doc.global_event.size() == 6 &&
              doc.classifiers.size() == 6 && endpoint && events == expected && count("<extension ") == 4 &&
              count("<classifier ") == 6;
    std::string detail = std::to_string(doc.extensions.size()) + " extensions, " + std::to_string(doc.global_trace.size()) +
                         " trace globals, " + std::to_string(doc.global_event.size()) + " event globals, " +
                         std::to_string(doc.classifiers.size()) + " classifiers (CPEE Endpoint " +
                         (endpoint ? "present" : "missing") + "), " + std::to_string(events) + " events (YAML count " +
                         std::to_string(expected) + ")";
    return {ok ? Status::pass : Status::fail, detail};
}

an::Matrix blobs(Rng& rng, std::size_t per, std::size_t centers, std::size_t dims, double spread, an::Labels* labels = nullptr) {
    std::normal_distribution<double> g(0.0, 1.0);
    an::Matrix m(per * centers, dims);
    for (std::size_t c = 0; c < centers; ++c) {
        for (std::size_t i = 0; i < per; ++i) {
            for (std::size_t d = 0; d < dims; ++d) m(c * per + i, d) = spread * static_cast<double>((c * 7 + d * 3) % 5) + g(rng);
            if (labels) labels->push_back(c % 2 == 0);
        }
    }
    return m;
}

Outcome analytics_properties() {
    Rng rng(6);
    std::vector<std::string> notes;
    bool ok = true;

    // silhouette range
    double smin = 1, smax = -1;
    std::size_t silhouettes = 0;
    for (int f = 0; f < 10; ++f) {
        auto x = blobs(rng, 8 + f, 3, 2 + f % 3, 2.0 + f);
        for (std::size_t k = 2; k <= 6; ++k) {
            for (auto r : {an::hierarchical_cluster(x, k), an::kmeans_cluster(x, k, static_cast<std::uint64_t>(f))}) {
                for (double w : r.silhouette) {
                    smin = std::min(smin, w);
                    smax = std::max(smax, w);
                }
                ++silhouettes;
            }
        }
    }
    bool sil_ok = smin >= -1.0 && smax <= 1.0;
    notes.push_back("silhouette in [" + fmt(smin, 3) + ", " + fmt(smax, 3) + "] over " + std::to_string(silhouettes) + " clusterings");
    ok = ok && sil_ok;

    // WSS monotone
    std::size_t wss_violations = 0;
    for (int f = 0; f < 10; ++f) {
        auto x = blobs(rng, 10, 4, 3, 3.0);
        auto curve = an::scree(x, 15, 11, 20);
        for (std::size_t i = 1; i < curve.size(); ++i) {
            if (curve[i].wss > curve[i - 1].wss * (1 + 1e-9) + 1e-12) ++wss_violations;
        }
    }
    notes.push_back("WSS increases: " + std::to_string(wss_violations));
    ok = ok && wss_violations == 0;

    // SVM KKT residual on every training run
    double worst_kkt = 0;
    std::size_t runs = 0, not_converged = 0;
    for (int f = 0; f < 12; ++f) {
        an::Labels y;
        auto x = blobs(rng, 15, 2, 4 + f % 4, 0.5 + 0.3 * f, &y);
        for (auto kernel : {an::Kernel::linear, an::Kernel::polynomial, an::Kernel::radial, an::Kernel::sigmoid}) {
            for (double cost : {0.1, 1.0, 10.0}) {
                an::SvmParams p;
                p.kernel = kernel;
                p.cost = cost;
                auto m = an::train_svm(x, y, p);
                worst_kkt = std::max(worst_kkt, m.kkt_residual);
                not_converged += !m.converged;
                ++runs;
            }
        }
    }
    notes.push_back("max KKT residual " + std::to_string(worst_kkt) + " over " + std::to_string(runs) + " SVM fits");
    ok = ok && worst_kkt < 1e-3 && not_converged == 0;

    // separable set, linear kernel
    {
        an::Labels y;
        an::Matrix x(40, 2);
        std::uniform_real_distribution<double> u(-1, 1);
        for (std::size_t i = 0; i < 40; ++i) {
            bool pos = i % 2 == 0;
            x(i, 0) = u(rng) + (pos ? 3 : -3);
            x(i, 1) = u(rng);
            y.push_back(pos);
        }
        an::SvmParams p;
        p.kernel = an::Kernel::linear;
        auto m = an::train_svm(x, y, p);
        auto pred = an::predict(an::ClassifierModel{m}, x, &y);
        notes.push_back("linear SVM train accuracy " + fmt(100 * *pred.accuracy, 1) + "%");
        ok = ok && *pred.accuracy == 1.0;
    }

    // naive Bayes on 6 sigma separated Gaussians
    {
        std::normal_distribution<double> g(0.0, 1.0);
        auto sample = [&](std::size_t n, an::Labels& y) {
            an::Matrix x(n, 1);
            for (std::size_t i = 0; i < n; ++i) {
                bool pos = i % 2 == 1;
                x(i, 0) = g(rng) + (pos ? 6.0 : 0.0);
                y.push_back(pos);
            }
            return x;
        };
        an::Labels ytr, yte;
        auto xtr = sample(400, ytr);
        auto xte = sample(2000, yte);
        auto nb = an::train_naive_bayes(xtr, ytr);
        auto pred = an::predict(an::ClassifierModel{nb}, xte, &yte);
        notes.push_back("naive Bayes accuracy " + fmt(100 * *pred.accuracy, 2) + "%");
        ok = ok && *pred.accuracy >= 0.99;
    }

    // majority mapping fixture
    {
        std::vector<std::size_t> clusters{1, 1, 1, 2, 2};
        an::Labels labels{1, 1, 0, 0, 0};
        auto ca = an::cluster_accuracy(clusters, labels);
        notes.push_back("cluster accuracy fixture " + fmt(ca.accuracy, 3));
        ok = ok && std::abs(ca.accuracy - 0.8) < 1e-12;
    }

    std::string detail;
    for (std::size_t i = 0; i < notes.size(); ++i) detail += (i ? "; " : "") + notes[i];
    return {ok ? Status::pass : Status::fail, detail};
}

const char* env(const char* name) {
    const char* v = std::getenv(name);
    return v && *v ? v : nullptr;
}

std::string list_text(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

// parameter ids carry a machine prefix; count them by signal name
std::map<std::string, std::size_t> signal_counts(const std::vector<std::string>& params,
                                                 const std::vector<std::string>& signals) {
    std::map<std::string, std::size_t> out;
    for (const auto& p : params) {
        for (const auto& s : signals) {
            if (p.find(s) != std::string::npos) {
                ++out[s];
                break;
            }
        }
    }
    return out;
}

Outcome dataset_numbers() {
    const char* d1 = env("PROCMINE_SCENARIO1_DIR");
    const char* d2 = env("PROCMINE_SCENARIO2_DIR");
    if (!d1 && !d2) return {Status::skip, "set PROCMINE_SCENARIO1_DIR / PROCMINE_SCENARIO2_DIR to the dataset directories"};
    std::vector<std::string> notes;
    bool ok = true;
    try {
        if (d1) {
            std::vector<fs::path> csvs;
            for (const auto& e : fs::recursive_directory_iterator(d1)) {
                if (e.path().extension() == ".csv") csvs.push_back(e.path());
            }
            if (csvs.empty()) {
                // machining logs as YAML: extract first
                auto dir = scratch("scenario1_csv");
                for (const auto& e : fs::recursive_directory_iterator(d1)) {
                    if (e.path().extension() != ".yaml") continue;
                    auto t = logs::load_yaml_trace(e.path());
                    auto rows = logs::extract_machining_rows(t);
                    if (!rows.empty()) csvs.push_back(logs::write_machining_csv(rows, t.concept_name, dir).path);
                }
            }
            std::sort(csvs.begin(), csvs.end(), [](const fs::path& a, const fs::path& b) {
                return an::natural_less(a.filename().string(), b.filename().string());
            });
            auto load = an::load_series(csvs);
            auto kept = an::filter_logs(load.logs, 100, true);
            auto params = an::select_parameters(kept, 10);
            bool logs_ok = kept.size() == 41 && load.logs.size() == 47;
            auto sig = signal_counts(params, {"aaLoad", "aaTorque", "driveLoad"});
            bool params_ok = params.size() == 7 && sig["aaLoad"] == 3 && sig["aaTorque"] == 3 && sig["driveLoad"] == 1;
            notes.push_back("scenario1 " + std::to_string(kept.size()) + "/" + std::to_string(load.logs.size()) + " logs, " +
                            std::to_string(params.size()) + " parameters (" + list_text(params) + ")");
            ok = ok && logs_ok && params_ok;
        }
        if (d2) {
            std::vector<fs::path> csvs;
            fs::path measurements;
            for (const auto& e : fs::recursive_directory_iterator(d2)) {
                if (e.path().extension() != ".csv") continue;
                auto name = e.path().filename().string();
                if (name.find("easur") != std::string::npos) measurements = e.path();
                else csvs.push_back(e.path());
            }
            std::sort(csvs.begin(), csvs.end(), [](const fs::path& a, const fs::path& b) {
                return an::natural_less(a.filename().string(), b.filename().string());
            });
            auto load = an::load_series(csvs);
            auto kept = an::filter_logs(load.logs, 100, true);
            auto params = an::select_parameters(kept, 10);
            auto sig = signal_counts(params, {"aaLeadP", "aaLoad", "aaTorque", "aaVactB", "actSpeed", "driveLoad"});
            bool params_ok = params.size() == 14 && sig["aaLeadP"] == 3 && sig["aaLoad"] == 3 && sig["aaTorque"] == 3 &&
                             sig["aaVactB"] == 3 && sig["actSpeed"] == 1 && sig["driveLoad"] == 1;
            auto table = an::apply_measurement_shift(an::load_measurements(measurements), 129, 180, 2);
            auto mm1 = an::labels_from_measurements(kept, table, "MM1");
            auto count = [&](const std::string& sel) {
                auto lv = an::labels_from_measurements(kept, table, sel);
                std::size_t pos = static_cast<std::size_t>(std::count(lv.values.begin(), lv.values.end(), 1));
                return std::make_pair(pos, lv.values.size() - pos);
            };
            auto c_mm1 = count("MM1"), c_k1 = count("Kreis.19.2.1.Konzentrizitaet"),
                 c_k2 = count("Kreis.19.2.2.Konzentrizitaet"), c_z = count("Zylinder.4.5.B.Durchmesser");
            std::array<std::array<std::size_t, 2>, 2> conf{};
            for (const auto& log : kept) {
                if (log.ordinal >= table.size() || !table.manual[0][log.ordinal]) continue;
                auto a = table.automatic_acceptance(log.ordinal);
                auto m = table.manual_acceptance(log.ordinal);
                if (a && m) ++conf[*a][*m];
            }
            bool counts_ok = kept.size() == 202 && load.logs.size() == 205 && params_ok &&
                             mm1.values.size() == 196 && c_mm1 == std::make_pair<std::size_t, std::size_t>(181, 15) &&
                             c_k1 == std::make_pair<std::size_t, std::size_t>(76, 120) &&
                             c_k2 == std::make_pair<std::size_t, std::size_t>(73, 123) &&
                             c_z == std::make_pair<std::size_t, std::size_t>(152, 44);
            // [automatic][manual]
            bool conf_ok = conf[1][1] == 51 && conf[1][0] == 4 && conf[0][1] == 129 && conf[0][0] == 12;

            // degenerate predictor on MM1: accuracy close to the majority share
            auto fm = an::build_feature_matrix(kept, params, an::WindowSpec{an::WindowPosition::last, 5});
            auto data = an::join_labels(fm, mm1);
            auto split = an::split_train_test(data.labels.size(), 0.75, 1);
            auto model = an::train_svm(data.features.values.select_rows(split.train), an::select(data.labels, split.train), {});
            auto ytest = an::select(data.labels, split.test);
            auto pred = an::predict(an::ClassifierModel{model}, data.features.values.select_rows(split.test), &ytest);
            double majority = static_cast<double>(std::max(c_mm1.first, c_mm1.second)) / static_cast<double>(c_mm1.first + c_mm1.second);
            bool degenerate = std::abs(*pred.accuracy - majority) <= 0.05;

            notes.push_back("scenario2 " + std::to_string(kept.size()) + "/" + std::to_string(load.logs.size()) + " logs, " +
                            std::to_string(params.size()) + " parameters, " + std::to_string(mm1.values.size()) +
                            " labeled; MM1 " + std::to_string(c_mm1.first) + "/" + std::to_string(c_mm1.second) + ", Kreis-1 " +
                            std::to_string(c_k1.first) + "/" + std::to_string(c_k1.second) + ", Kreis-2 " +
                            std::to_string(c_k2.first) + "/" + std::to_string(c_k2.second) + ", Zylinder " +
                            std::to_string(c_z.first) + "/" + std::to_string(c_z.second) + "; confusion " +
                            std::to_string(conf[1][1]) + "/" + std::to_string(conf[1][0]) + "/" + std::to_string(conf[0][1]) +
                            "/" + std::to_string(conf[0][0]) + "; MM1 SVM test accuracy " + fmt(100 * *pred.accuracy, 1) +
                            "% vs majority " + fmt(100 * majority, 1) + "%");
            ok = ok && counts_ok && conf_ok && degenerate;
        }
    } catch (const std::exception& ex) {
        return {Status::fail, std::string("error: ") + ex.what()};
    }
    std::string detail;
    for (std::size_t i = 0; i < notes.size(); ++i) detail += (i ? "; " : "") + notes[i];
    return {ok ? Status::pass : Status::fail, detail};
}

Outcome determinism() {
    auto dir = scratch("determinism");
    auto s1 = write_scenario1(dir / "data1", 8);
    auto s2 = write_scenario2(dir / "data2", 9);
    std::vector<std::string> notes;
    bool ok = true;
    struct Run {
        std::string name;
        std::vector<std::string> args;
    };
    std::vector<Run> runs{
        {"scenario1", {"report", "--preset", "scenario1", "--yaml", s1.yaml_dir.string(), "--seed", "17"}},
        {"scenario2",
         {"report", "--preset", "scenario2", "--csv", s2.csv_dir.string(), "--measurements", s2.measurements.string(), "--seed", "17"}},
    };
    for (const auto& r : runs) {
        auto out = dir / r.name;
        auto args = [&](std::vector<std::string> extra) {
            auto v = r.args;
            v.push_back("--out-dir");
            v.push_back(out.string());
            v.insert(v.begin(), extra.begin(), extra.end());
            return v;
        };
        auto snapshot = [&](const std::string& tag) {
            auto to = dir / (r.name + "_" + tag);
            fs::copy(out, to, fs::copy_options::recursive);
            return to;
        };
        std::string err;
        int rc1 = cli(args({}), &err);
        auto first = snapshot("first");
        int rc2 = cli(args({}));
        auto d_again = diff_trees(first, out);
        int rc3 = cli(args({"--jobs", "4"}));
        auto d_jobs = diff_trees(first, out);
        int rc4 = cli({"rerun", (out / "manifest.json").string()});
        auto d_rerun = diff_trees(first, out);
        if (rc1 || rc2 || rc3 || rc4) {
            notes.push_back(r.name + " exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2) + "/" +
                            std::to_string(rc3) + "/" + std::to_string(rc4) + ": " + err);
            ok = false;
            continue;
        }
        std::size_t files = 0;
        for (const auto& e : fs::recursive_directory_iterator(first)) files += e.is_regular_file();
        notes.push_back(r.name + ": " + std::to_string(files) + " files, " + std::to_string(d_again.size()) +
                        " differ on a second run, " + std::to_string(d_jobs.size()) + " with --jobs 4, " +
                        std::to_string(d_rerun.size()) + " after rerun from the manifest");
        for (const auto& f : d_again) notes.back() += " [" + f + "]";
        ok = ok && d_again.empty() && d_jobs.empty() && d_rerun.empty() && files > 5;
    }
    std::string detail;
    for (std::size_t i = 0; i < notes.size(); ++i) detail += (i ? "; " : "") + notes[i];
    return {ok ? Status::pass : Status::fail, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        std::function<Outcome()> check;
    };
    std::vector<Criterion> criteria{
        {1, "transformation correctness", transformation_correctness},
        {2, "alignment optimality", alignment_optimality},
        {3, "TPN codec", tpn_codec},
        {4, "template identification", template_identification},
        {5, "XES structure", xes_structure},
        {6, "analytics properties", analytics_properties},
        {7, "dataset number reproduction", dataset_numbers},
        {8, "end-to-end determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& ex) {
            o = {Status::fail, std::string("exception: ") + ex.what()};
        }
        const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::skip ? "SKIP" : "FAIL";
        failed += o.status == Status::fail;
        std::cout << tag << " criterion " << c.id << " (" << c.name << "): " << o.detail << std::endl;
    }
    fs::remove_all(fs::temp_directory_path() / ("procmine_acceptance_" + std::to_string(::getpid())));
    return failed ? 1 : 0;
}
