#include <algorithm>
#include <cctype>
#include <sstream>

#include "commands.hpp"
#include "pipeline.hpp"
#include "procmine/cli.hpp"
#include "procmine/error.hpp"
#include "procmine/instance_tree.hpp"
#include "procmine/machining.hpp"

namespace procmine::cli {

namespace fs = std::filesystem;
using namespace procmine::analytics;

ScenarioPreset scenario_preset(const std::string& name) {
    ScenarioPreset p;
    p.name = name;
    if (name == "scenario1") {
        p.windows = {WindowPosition::last};
        p.window_k = 10;
        p.cluster_ks = {2, 7, 18};
        p.scree_max = 20;
        p.rfe = true;
    } else if (name == "scenario2") {
        p.windows = {WindowPosition::last, WindowPosition::first, WindowPosition::middle};
        p.window_k = 5;
        p.shift = ShiftSpec{129, 180, 2};
        p.label_selections = {"MM1", "Kreis.19.2.1.Konzentrizitaet", "Kreis.19.2.2.Konzentrizitaet",
                              "Zylinder.4.5.B.Durchmesser", "automatic", "manual"};
    } else {
        throw ValidationError("unknown preset '" + name + "' (expected scenario1 or scenario2)");
    }
    return p;
}

namespace {

struct ReportOpts {
    std::string preset, out_dir, measurements, params, spawn_field, windows, cluster_ks, shift, selections;
    std::vector<std::string> yaml, csv;
    std::optional<std::size_t> min_points, k, occurrence, scree;
    std::optional<bool> rfe;
    bool exclusive = false;
    std::uint64_t seed = 1;
    double split = 0.75;
    std::size_t restarts = 20, trees = 100, folds = 5;
};

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, sep);) {
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

std::string slug(const std::string& s) {
    std::string out;
    for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

struct ModelGrid {
    std::vector<ModelSpec> specs;
};

std::vector<ModelSpec> model_grid() {
    std::vector<ModelSpec> out;
    for (auto k : {Kernel::linear, Kernel::polynomial, Kernel::radial, Kernel::sigmoid}) {
        ModelSpec s;
        s.model = "svm";
        s.svm.kernel = k;
        out.push_back(s);
    }
    ModelSpec nb;
    nb.model = "nb";
    out.push_back(nb);
    return out;
}

class Report {
public:
    Report(Context& ctx, const ReportOpts& o, ScenarioPreset preset)
        : ctx_(ctx), o_(o), p_(std::move(preset)), m_(ctx, "report") {
        dir_ = o.out_dir.empty() ? default_out_dir() / p_.name : fs::path(o.out_dir);
        m_.seed(o.seed);
        Json& c = m_.config;
        c["preset"] = p_.name;
        c["min_points"] = p_.min_points;
        c["inclusive"] = p_.inclusive;
        Json w = Json::array();
        for (auto x : p_.windows) w.push_back(to_string(x));
        c["windows"] = w;
        c["window_k"] = p_.window_k;
        c["min_occurrence"] = p_.min_occurrence;
        c["shift"] = p_.shift ? Json(std::to_string(p_.shift->from) + ":" + std::to_string(p_.shift->to) + ":" +
                                     std::to_string(p_.shift->offset))
                              : Json(nullptr);
        c["cluster_k"] = p_.cluster_ks;
        c["scree_max"] = p_.scree_max;
        c["labels"] = p_.label_selections;
        c["rfe"] = p_.rfe;
        c["split"] = o.split;
        c["restarts"] = o.restarts;
        c["trees"] = o.trees;
        c["folds"] = o.folds;
    }

    int run() {
        if (p_.name == "scenario1") scenario1();
        else scenario2();
        summary_["preset"] = p_.name;
        emit(m_, dir_ / "report.json", summary_.dump(2) + "\n");
        write_manifest(m_, dir_ / "manifest.json");
        ctx_.out << "report written to " << dir_.generic_string() << '\n';
        return 0;
    }

private:
    std::vector<MachiningSeries> load_logs(const std::vector<fs::path>& files) {
        for (const auto& f : files) m_.input(f);
        auto load = load_series(files);
        for (const auto& w : load.warnings) warn(ctx_, m_, w);
        auto kept = filter_logs(load.logs, p_.min_points, p_.inclusive);
        ctx_.out << "logs: " << kept.size() << " of " << load.logs.size() << " retained\n";
        summary_["logs_total"] = load.logs.size();
        summary_["logs_retained"] = kept.size();
        if (kept.empty()) throw ValidationError("no log has enough data points");
        return kept;
    }

    std::vector<std::string> parameters(const std::vector<MachiningSeries>& logs) {
        auto params = o_.params.empty() ? select_parameters(logs, p_.min_occurrence) : split_list(o_.params, ',');
        ctx_.out << "parameters: " << params.size() << '\n';
        summary_["parameters"] = params;
        return params;
    }

    void classification(const std::vector<std::tuple<std::string, std::string, const LabeledData*>>& sets) {
        auto grid = model_grid();
        struct Task {
            std::size_t set;
            ModelSpec spec;
        };
        std::vector<Task> tasks;
        for (std::size_t s = 0; s < sets.size(); ++s) {
            for (const auto& g : grid) tasks.push_back({s, g});
        }
        std::vector<std::optional<ClassifyResult>> results(tasks.size());
        std::vector<std::string> errors(tasks.size());
        parallel_for(tasks.size(), ctx_.jobs, [&](std::size_t i) {
            const auto* data = std::get<2>(sets[tasks[i].set]);
            try {
                results[i] = classify(data->features.values, data->labels, tasks[i].spec, o_.split, o_.seed);
            } catch (const ValidationError& ex) {
                errors[i] = ex.what();
            }
        });
        std::string csv = classification_header({"window", "label"});
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const auto& [window, label, data] = sets[tasks[i].set];
            if (!results[i]) {
                warn(ctx_, m_, window + "/" + label + "/" + tasks[i].spec.model + ": " + errors[i]);
                continue;
            }
            csv += classification_row({window, label}, *results[i]);
        }
        emit(m_, dir_ / "classification.csv", csv);
    }

    void clustering(const LabeledData& data, const std::string& tag, std::string& summary, std::string& sil) {
        std::vector<std::size_t> ks;
        for (auto k : p_.cluster_ks) {
            if (k <= data.labels.size()) ks.push_back(k);
            else warn(ctx_, m_, "k = " + std::to_string(k) + " exceeds the " + std::to_string(data.labels.size()) + " rows, skipped");
        }
        std::vector<ClusterRun> runs(ks.size() * 2);
        parallel_for(runs.size(), ctx_.jobs, [&](std::size_t i) {
            runs[i] = cluster(data.features.values, i % 2 ? "kmeans" : "hclust", ks[i / 2], o_.seed, o_.restarts,
                              &data.labels);
        });
        for (const auto& r : runs) {
            summary += clustering_row({tag}, r);
            sil += silhouette_rows({tag}, r, data.features.row_ids);
        }
    }

    void scenario1() {
        if (o_.yaml.empty()) throw ValidationError("scenario1 needs --yaml logs");
        std::vector<logs::TraceRecord> traces;
        for (const auto& p : expand_inputs(o_.yaml, ".yaml")) {
            m_.input(p);
            traces.push_back(logs::load_yaml_trace(p));
        }
        logs::LinkOptions lo;
        if (!o_.spawn_field.empty()) lo.spawn_field = o_.spawn_field;
        auto tree = logs::link_subprocesses(traces, lo);
        for (const auto& w : tree.warnings) warn(ctx_, m_, w);

        std::vector<fs::path> files;
        if (!o_.csv.empty()) {
            files = expand_inputs(o_.csv, ".csv");
        } else {
            for (const auto& t : traces) {
                auto rows = logs::extract_machining_rows(t);
                if (rows.empty()) continue;
                std::vector<std::string> warnings;
                auto text = logs::machining_csv_text(rows, &warnings);
                for (const auto& w : warnings) warn(ctx_, m_, "trace " + t.concept_name + ": " + w);
                emit(m_, dir_ / "machining" / ("log" + t.concept_name + ".csv"), text);
            }
            files = expand_inputs({(dir_ / "machining").string()}, ".csv");
        }
        auto logs = load_logs(files);
        auto params = parameters(logs);
        auto fm = build_feature_matrix(logs, params, WindowSpec{p_.windows.front(), p_.window_k});
        emit(m_, dir_ / ("features_" + to_string(p_.windows.front()) + ".csv"), feature_csv(fm));

        auto lv = labels_from_spawns(fm.row_ids, traces, tree);
        for (const auto& w : lv.warnings) warn(ctx_, m_, w);
        emit(m_, dir_ / "labels.csv", labels_csv(lv));
        auto data = join_labels(fm, lv);
        std::size_t pos = static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), 1));
        summary_["labeled"] = data.labels.size();
        summary_["labeled_true"] = pos;
        ctx_.out << "labeled logs: " << data.labels.size() << " (" << pos << " true)\n";

        classification({{to_string(p_.windows.front()), "last_child", &data}});

        std::string summary = clustering_header({"features"}), sil = silhouette_header({"features"});
        clustering(data, "all", summary, sil);
        if (p_.scree_max) {
            std::size_t kmax = std::min(p_.scree_max, data.labels.size());
            emit(m_, dir_ / "scree.csv", scree_csv(scree(data.features.values, kmax, o_.seed, o_.restarts)));
        }
        if (p_.rfe) {
            RfeOptions ro;
            ro.folds = std::min(o_.folds, data.labels.size());
            ro.forest.trees = o_.trees;
            auto r = rfe_select(data.features.values, data.labels, data.features.columns, o_.seed, ro);
            emit(m_, dir_ / "rfe.csv", rfe_profile_csv(r));
            emit(m_, dir_ / "rfe_selection.json", to_json(r).dump(2) + "\n");
            summary_["rfe_best_size"] = r.best_size;
            ctx_.out << "rfe best size: " << r.best_size << '\n';
            std::vector<std::size_t> cols;
            for (const auto& name : r.selected) {
                cols.push_back(static_cast<std::size_t>(
                    std::find(data.features.columns.begin(), data.features.columns.end(), name) -
                    data.features.columns.begin()));
            }
            LabeledData reduced = data;
            reduced.features.values = data.features.values.select_cols(cols);
            reduced.features.columns = r.selected;
            clustering(reduced, "rfe", summary, sil);
        }
        emit(m_, dir_ / "clustering.csv", summary);
        emit(m_, dir_ / "silhouette.csv", sil);
    }

    void scenario2() {
        if (o_.csv.empty() || o_.measurements.empty()) throw ValidationError("scenario2 needs --csv and --measurements");
        auto logs = load_logs(expand_inputs(o_.csv, ".csv"));
        auto params = parameters(logs);
        m_.input(o_.measurements);
        auto table = load_measurements(o_.measurements);
        if (p_.shift) table = apply_measurement_shift(table, p_.shift->from, p_.shift->to, p_.shift->offset);

        std::vector<std::string> warnings;
        auto restricted = restrict_to_logs(table, logs, &warnings);
        for (const auto& w : warnings) warn(ctx_, m_, w);
        auto st = measurement_stats(restricted);
        emit(m_, dir_ / "stats.csv", measurement_stats_csv(st));
        emit(m_, dir_ / "stats_confusion.csv", confusion_csv(st));
        summary_["labeled"] = restricted.size();
        ctx_.out << "parts with measurements: " << restricted.size() << '\n';

        std::vector<std::pair<std::string, LabelVector>> label_sets;
        for (const auto& sel : p_.label_selections) {
            try {
                auto lv = labels_from_measurements(logs, table, sel);
                emit(m_, dir_ / ("labels_" + slug(sel) + ".csv"), labels_csv(lv));
                label_sets.emplace_back(sel, std::move(lv));
            } catch (const ValidationError& ex) {
                warn(ctx_, m_, ex.what());
            }
        }

        std::vector<LabeledData> data;
        std::vector<std::pair<std::string, std::string>> names;
        data.reserve(p_.windows.size() * label_sets.size());
        for (auto w : p_.windows) {
            auto fm = build_feature_matrix(logs, params, WindowSpec{w, p_.window_k});
            emit(m_, dir_ / ("features_" + to_string(w) + ".csv"), feature_csv(fm));
            for (const auto& [sel, lv] : label_sets) {
                data.push_back(join_labels(fm, lv));
                names.emplace_back(to_string(w), sel);
            }
        }
        std::vector<std::tuple<std::string, std::string, const LabeledData*>> sets;
        for (std::size_t i = 0; i < data.size(); ++i) sets.emplace_back(names[i].first, names[i].second, &data[i]);
        classification(sets);

        if (p_.rfe) {
            std::string csv = "window,label,variables,rmse,rmse_sd,selected\n";
            for (std::size_t i = 0; i < data.size(); ++i) {
                RfeOptions ro;
                ro.folds = std::min(o_.folds, data[i].labels.size());
                ro.forest.trees = o_.trees;
                try {
                    auto r = rfe_select(data[i].features.values, data[i].labels, data[i].features.columns, o_.seed, ro);
                    for (const auto& pt : r.profile) {
                        csv += delimited_row({names[i].first, names[i].second, std::to_string(pt.size), num(pt.rmse),
                                              num(pt.rmse_sd), bool_text(pt.size == r.best_size)},
                                             ',');
                    }
                } catch (const ValidationError& ex) {
                    warn(ctx_, m_, names[i].first + "/" + names[i].second + " rfe: " + ex.what());
                }
            }
            emit(m_, dir_ / "rfe.csv", csv);
        }
        if (!p_.cluster_ks.empty() && !data.empty()) {
            std::string summary = clustering_header({"features"}), sil = silhouette_header({"features"});
            clustering(data.front(), names.front().first, summary, sil);
            emit(m_, dir_ / "clustering.csv", summary);
            emit(m_, dir_ / "silhouette.csv", sil);
        }
    }

    Context& ctx_;
    const ReportOpts& o_;
    ScenarioPreset p_;
    Manifest m_;
    fs::path dir_;
    Json summary_ = Json::object();
};

int report(Context& ctx, const ReportOpts& o) {
    auto p = scenario_preset(o.preset);
    if (o.min_points) p.min_points = *o.min_points;
    if (o.exclusive) p.inclusive = false;
    if (o.k) p.window_k = *o.k;
    if (o.occurrence) p.min_occurrence = *o.occurrence;
    if (o.scree) p.scree_max = *o.scree;
    if (o.rfe) p.rfe = *o.rfe;
    if (!o.windows.empty()) {
        p.windows.clear();
        for (const auto& w : split_list(o.windows, ',')) p.windows.push_back(parse_window_position(w));
    }
    if (!o.cluster_ks.empty()) p.cluster_ks = o.cluster_ks == "none" ? std::vector<std::size_t>{} : parse_size_list(o.cluster_ks);
    if (!o.shift.empty()) p.shift = o.shift == "none" ? std::nullopt : std::optional(parse_shift(o.shift));
    if (!o.selections.empty()) p.label_selections = split_list(o.selections, ';');
    if (p.windows.empty()) throw ValidationError("no window position given");
    return Report(ctx, o, p).run();
}

}  // namespace

void add_report_command(CLI::App& app, Context& ctx, Action& action) {
    auto o = std::make_shared<ReportOpts>();
    auto* sub = app.add_subcommand("report", "Run a whole experiment from a scenario preset");
    sub->add_option("--preset", o->preset, "scenario1 or scenario2")->required();
    sub->add_option("--yaml", o->yaml, "YAML logs, files or directories (scenario1)");
    sub->add_option("--csv", o->csv, "Machining CSV files or directories");
    sub->add_option("--measurements", o->measurements, "Measuring file (scenario2)")->check(CLI::ExistingFile);
    sub->add_option("-o,--out-dir,--outdir", o->out_dir, "Output directory (default $PROCMINE_OUT_DIR/<preset>)");
    sub->add_option("--seed", o->seed, "Random seed");
    sub->add_option("--split", o->split, "Training fraction");
    sub->add_option("--min-points", o->min_points, "Minimum rows per log");
    sub->add_flag("--exclusive", o->exclusive, "Require more than --min-points rows");
    sub->add_option("--window", o->windows, "Window positions, e.g. first,middle,last");
    sub->add_option("--k", o->k, "Values per parameter");
    sub->add_option("--occurrence", o->occurrence, "Minimum per-log occurrence of a parameter");
    sub->add_option("--params", o->params, "Comma-separated parameter ids (skips selection)");
    sub->add_option("--cluster-k", o->cluster_ks, "Cluster counts, or none");
    sub->add_option("--scree", o->scree, "Largest k of the WSS curve (0 = none)");
    sub->add_option("--restarts", o->restarts, "k-means restarts");
    sub->add_option("--rfe", o->rfe, "Run feature elimination (true/false)");
    sub->add_option("--trees", o->trees, "Trees per forest");
    sub->add_option("--folds", o->folds, "Cross-validation folds");
    sub->add_option("--shift", o->shift, "Manual measurement correction from:to:offset, or none");
    sub->add_option("--select", o->selections, "Semicolon-separated label selections (scenario2)");
    sub->add_option("--spawn-field", o->spawn_field, "Event data key holding child instance references");
    sub->callback([&, o] { action = [&ctx, o] { return report(ctx, *o); }; });
}

}  // namespace procmine::cli
