#include <map>

#include "commands.hpp"
#include "pipeline.hpp"
#include "procmine/analytics/features.hpp"
#include "procmine/cli.hpp"
#include "procmine/error.hpp"
#include "procmine/instance_tree.hpp"
#include "procmine/io.hpp"

namespace procmine::cli {

namespace fs = std::filesystem;
using namespace procmine::analytics;

namespace {

fs::path out_or(const std::string& given, const std::string& fallback) {
    return given.empty() ? default_out_dir() / fallback : fs::path(given);
}

FeatureMatrix load_features(const std::string& path, Manifest& m) {
    m.input(path);
    return parse_feature_csv(read_file(path));
}

LabeledData load_labeled(const Context& ctx, const std::string& features, const std::string& labels, Manifest& m) {
    auto fm = load_features(features, m);
    m.input(labels);
    auto data = join_labels(fm, parse_labels_csv(read_file(labels)));
    for (const auto& w : data.warnings) warn(ctx, m, w);
    if (data.labels.empty()) throw ValidationError("no feature row has a label");
    return data;
}

// ---- features

struct FeaturesOpts {
    std::vector<std::string> inputs;
    std::string preset, params, window = "last", output;
    std::size_t min_points = 100, occurrence = 10, k = 10;
    bool exclusive = false;
};

int features(Context& ctx, const FeaturesOpts& o) {
    Manifest m(ctx, "features");
    auto files = expand_inputs(o.inputs, ".csv");
    for (const auto& f : files) m.input(f);
    auto load = load_series(files);
    for (const auto& w : load.warnings) warn(ctx, m, w);
    auto kept = filter_logs(load.logs, o.min_points, !o.exclusive);
    if (kept.empty()) throw ValidationError("no log has enough data points");
    std::vector<std::string> params;
    if (!o.params.empty()) {
        std::stringstream ss(o.params);
        for (std::string p; std::getline(ss, p, ',');) params.push_back(p);
    } else {
        params = select_parameters(kept, o.occurrence);
    }
    WindowSpec spec{parse_window_position(o.window), o.k};
    auto fm = build_feature_matrix(kept, params, spec);

    m.config["min_points"] = o.min_points;
    m.config["inclusive"] = !o.exclusive;
    m.config["min_occurrence"] = o.occurrence;
    m.config["window"] = o.window;
    m.config["k"] = o.k;
    m.config["parameters"] = params;
    fs::path out = out_or(o.output, "features.csv");
    emit(m, out, feature_csv(fm));
    write_manifest(m, sibling(out, ".manifest.json"));
    ctx.out << "logs: " << kept.size() << " of " << load.logs.size() << " retained\n";
    ctx.out << "parameters: " << params.size() << '\n';
    for (const auto& p : params) ctx.out << "  " << p << '\n';
    ctx.out << "matrix: " << fm.values.rows << " x " << fm.values.cols << '\n';
    return 0;
}

// ---- labels

struct LabelsOpts {
    std::vector<std::string> yaml;
    std::string features, measurements, select = "MM1", shift, spawn_field, output;
    std::vector<std::string> csv;
    std::size_t min_points = 100;
    bool exclusive = false;
};

int labels(Context& ctx, const LabelsOpts& o) {
    Manifest m(ctx, "labels");
    LabelVector lv;
    if (!o.yaml.empty()) {
        if (o.features.empty()) throw ValidationError("--features is required with --yaml");
        auto fm = load_features(o.features, m);
        std::vector<logs::TraceRecord> traces;
        for (const auto& p : expand_inputs(o.yaml, ".yaml")) {
            m.input(p);
            traces.push_back(logs::load_yaml_trace(p));
        }
        logs::LinkOptions lo;
        if (!o.spawn_field.empty()) lo.spawn_field = o.spawn_field;
        auto tree = logs::link_subprocesses(traces, lo);
        for (const auto& w : tree.warnings) warn(ctx, m, w);
        lv = labels_from_spawns(fm.row_ids, traces, tree);
        m.config["source"] = "spawn";
    } else if (!o.measurements.empty()) {
        if (o.csv.empty()) throw ValidationError("--csv is required with --measurements");
        m.input(o.measurements);
        auto table = load_measurements(o.measurements);
        if (!o.shift.empty()) {
            auto s = parse_shift(o.shift);
            table = apply_measurement_shift(table, s.from, s.to, s.offset);
            m.config["shift"] = o.shift;
        }
        auto files = expand_inputs(o.csv, ".csv");
        for (const auto& f : files) m.input(f);
        auto load = load_series(files);
        auto kept = filter_logs(load.logs, o.min_points, !o.exclusive);
        lv = labels_from_measurements(kept, table, o.select);
        m.config["source"] = "measurements";
        m.config["select"] = o.select;
        m.config["min_points"] = o.min_points;
        m.config["inclusive"] = !o.exclusive;
    } else {
        throw ValidationError("give either --yaml (spawn labels) or --measurements");
    }
    for (const auto& w : lv.warnings) warn(ctx, m, w);
    fs::path out = out_or(o.output, "labels.csv");
    emit(m, out, labels_csv(lv));
    write_manifest(m, sibling(out, ".manifest.json"));
    std::size_t pos = static_cast<std::size_t>(std::count(lv.values.begin(), lv.values.end(), 1));
    ctx.out << "labels: " << lv.values.size() << " (" << pos << " true, " << lv.values.size() - pos << " false)\n";
    return 0;
}

// ---- cluster

struct ClusterOpts {
    std::string features, labels, method = "hclust", ks = "2", output;
    std::uint64_t seed = 1;
    std::size_t restarts = 20, scree = 0;
};

int cluster_cmd(Context& ctx, const ClusterOpts& o) {
    Manifest m(ctx, "cluster");
    m.seed(o.seed);
    m.config["method"] = o.method;
    m.config["k"] = o.ks;
    m.config["restarts"] = o.restarts;
    m.config["scree"] = o.scree;
    FeatureMatrix fm;
    Labels y;
    const Labels* labels = nullptr;
    if (!o.labels.empty()) {
        auto data = load_labeled(ctx, o.features, o.labels, m);
        fm = std::move(data.features);
        y = std::move(data.labels);
        labels = &y;
    } else {
        fm = load_features(o.features, m);
    }
    auto ks = parse_size_list(o.ks);
    std::vector<ClusterRun> runs(ks.size());
    parallel_for(ks.size(), ctx.jobs, [&](std::size_t i) { runs[i] = cluster(fm.values, o.method, ks[i], o.seed, o.restarts, labels); });

    fs::path out = out_or(o.output, "cluster.json");
    Json j;
    j["runs"] = Json::array();
    std::string summary = clustering_header({}), sil = silhouette_header({});
    for (const auto& r : runs) {
        j["runs"].push_back(to_json(r, fm.row_ids));
        summary += clustering_row({}, r);
        sil += silhouette_rows({}, r, fm.row_ids);
        ctx.out << o.method << " k=" << r.result.k << ": wss " << num(r.result.wss);
        if (!r.result.silhouette.empty()) ctx.out << ", silhouette " << num(r.result.average_silhouette);
        if (r.accuracy) ctx.out << ", accuracy " << num(r.accuracy->accuracy);
        ctx.out << '\n';
    }
    emit(m, out, j.dump(2) + "\n");
    emit(m, sibling(out, "_summary.csv"), summary);
    emit(m, sibling(out, "_silhouette.csv"), sil);
    if (o.scree) emit(m, sibling(out, "_scree.csv"), scree_csv(scree(fm.values, o.scree, o.seed, o.restarts)));
    write_manifest(m, sibling(out, ".manifest.json"));
    return 0;
}

// ---- classify

struct ClassifyOpts {
    std::string features, labels, model = "svm", kernel = "radial", output;
    double cost = 1.0, coef0 = 0.0, split = 0.75;
    std::optional<double> gamma;
    int degree = 3;
    bool no_scale = false;
    std::uint64_t seed = 1;
};

int classify_cmd(Context& ctx, const ClassifyOpts& o) {
    Manifest m(ctx, "classify");
    m.seed(o.seed);
    ModelSpec spec;
    spec.model = o.model;
    spec.svm.kernel = parse_kernel(o.kernel);
    spec.svm.cost = o.cost;
    spec.svm.gamma = o.gamma;
    spec.svm.degree = o.degree;
    spec.svm.coef0 = o.coef0;
    spec.svm.scale = !o.no_scale;
    m.config["model"] = o.model;
    if (o.model == "svm") {
        m.config["kernel"] = o.kernel;
        m.config["cost"] = o.cost;
        m.config["gamma"] = o.gamma ? Json(*o.gamma) : Json(nullptr);
        m.config["degree"] = o.degree;
        m.config["coef0"] = o.coef0;
        m.config["scale"] = !o.no_scale;
    }
    m.config["split"] = o.split;
    auto data = load_labeled(ctx, o.features, o.labels, m);
    auto r = classify(data.features.values, data.labels, spec, o.split, o.seed);
    fs::path out = out_or(o.output, "classify.json");
    emit(m, out, to_json(r).dump(2) + "\n");
    emit(m, sibling(out, "_predictions.csv"), predictions_csv(r, data.features.row_ids, data.labels));
    write_manifest(m, sibling(out, ".manifest.json"));
    ctx.out << o.model << (o.model == "svm" ? " (" + o.kernel + ")" : std::string()) << ": train "
            << num(r.train_accuracy) << ", test " << num(r.test_accuracy) << " (" << r.split.train.size() << "/"
            << r.split.test.size() << ")\n";
    return 0;
}

// ---- rfe

struct RfeOpts {
    std::string features, labels, sizes, output;
    std::size_t folds = 5, trees = 100;
    std::uint64_t seed = 1;
};

int rfe_cmd(Context& ctx, const RfeOpts& o) {
    Manifest m(ctx, "rfe");
    m.seed(o.seed);
    auto data = load_labeled(ctx, o.features, o.labels, m);
    RfeOptions opt;
    if (!o.sizes.empty()) opt.sizes = parse_size_list(o.sizes);
    opt.folds = o.folds;
    opt.forest.trees = o.trees;
    m.config["sizes"] = o.sizes.empty() ? Json("all") : Json(o.sizes);
    m.config["folds"] = o.folds;
    m.config["trees"] = o.trees;
    auto r = rfe_select(data.features.values, data.labels, data.features.columns, o.seed, opt);
    fs::path out = out_or(o.output, "rfe.csv");
    emit(m, out, rfe_profile_csv(r));
    emit(m, sibling(out, "_selection.json"), to_json(r).dump(2) + "\n");
    write_manifest(m, sibling(out, ".manifest.json"));
    ctx.out << "best size: " << r.best_size << '\n';
    for (const auto& s : r.selected) ctx.out << "  " << s << '\n';
    return 0;
}

// ---- stats

struct StatsOpts {
    std::string measurements, shift, output;
    std::vector<std::string> csv;
    std::size_t min_points = 100;
    bool exclusive = false;
};

}  // namespace

MeasurementTable restrict_to_logs(const MeasurementTable& table, const std::vector<MachiningSeries>& logs,
                                  std::vector<std::string>* warnings) {
    MeasurementTable out;
    out.automatic_skip = table.automatic_skip;
    out.test_names = table.test_names;
    out.tests.resize(table.tests.size());
    std::size_t missing = 0;
    for (const auto& l : logs) {
        std::size_t r = l.ordinal;
        if (r >= table.size()) {
            if (warnings) warnings->push_back("log " + l.log_id + ": no measurement row, excluded");
            continue;
        }
        if (!table.manual[0][r]) {
            ++missing;
            continue;
        }
        out.part_ids.push_back(table.part_ids[r]);
        for (int k = 0; k < 3; ++k) out.manual[k].push_back(table.manual[k][r]);
        for (std::size_t t = 0; t < table.tests.size(); ++t) out.tests[t].push_back(table.tests[t][r]);
    }
    if (missing && warnings) warnings->push_back(std::to_string(missing) + " log(s) without measurement results excluded");
    return out;
}

std::string confusion_csv(const MeasurementStats& st) {
    std::string out = "automatic,manual,count\n";
    for (int a = 1; a >= 0; --a) {
        for (int mm = 1; mm >= 0; --mm) {
            out += bool_text(a) + "," + bool_text(mm) + "," + std::to_string(st.confusion[a][mm]) + "\n";
        }
    }
    return out;
}

namespace {

int stats_cmd(Context& ctx, const StatsOpts& o) {
    Manifest m(ctx, "stats");
    m.input(o.measurements);
    auto table = load_measurements(o.measurements);
    if (!o.shift.empty()) {
        auto s = parse_shift(o.shift);
        table = apply_measurement_shift(table, s.from, s.to, s.offset);
        m.config["shift"] = o.shift;
    }
    if (!o.csv.empty()) {
        auto files = expand_inputs(o.csv, ".csv");
        for (const auto& f : files) m.input(f);
        auto kept = filter_logs(load_series(files).logs, o.min_points, !o.exclusive);
        std::vector<std::string> warnings;
        table = restrict_to_logs(table, kept, &warnings);
        for (const auto& w : warnings) warn(ctx, m, w);
        m.config["min_points"] = o.min_points;
        m.config["inclusive"] = !o.exclusive;
    }
    auto st = measurement_stats(table);
    fs::path out = out_or(o.output, "stats.csv");
    emit(m, out, measurement_stats_csv(st));
    emit(m, sibling(out, "_confusion.csv"), confusion_csv(st));
    write_manifest(m, sibling(out, ".manifest.json"));
    ctx.out << "parts: " << table.size() << '\n';
    for (const auto& c : st.counts) ctx.out << "  " << c.name << ": " << c.pass << " pass / " << c.fail << " fail\n";
    ctx.out << "automatic x manual: TT " << st.confusion[1][1] << ", TF " << st.confusion[1][0] << ", FT "
            << st.confusion[0][1] << ", FF " << st.confusion[0][0] << '\n';
    return 0;
}

}  // namespace

void add_analytics_commands(CLI::App& app, Context& ctx, Action& action) {
    {
        auto o = std::make_shared<FeaturesOpts>();
        auto* sub = app.add_subcommand("features", "Build a feature matrix from machining CSV files");
        sub->add_option("inputs", o->inputs, "CSV files or directories")->required();
        sub->add_option("--min-points", o->min_points, "Minimum rows per log");
        sub->add_flag("--exclusive", o->exclusive, "Require more than --min-points rows");
        sub->add_option("--occurrence", o->occurrence, "Minimum per-log occurrence of a parameter");
        sub->add_option("--params", o->params, "Comma-separated parameter ids (skips selection)");
        sub->add_option("--window", o->window, "Window position")->check(CLI::IsMember({"first", "middle", "last"}));
        sub->add_option("--k", o->k, "Values per parameter");
        sub->add_option("-o,--out", o->output, "Output CSV (default $PROCMINE_OUT_DIR/features.csv)");
        sub->callback([&, o] { action = [&ctx, o] { return features(ctx, *o); }; });
    }
    {
        auto o = std::make_shared<LabelsOpts>();
        auto* sub = app.add_subcommand("labels", "Derive log labels from spawn links or measurement results");
        sub->add_option("--yaml", o->yaml, "YAML logs (files or directories) for spawn labels");
        sub->add_option("--features", o->features, "Feature CSV whose rows get spawn labels");
        sub->add_option("--spawn-field", o->spawn_field, "Event data key holding child instance references");
        sub->add_option("--measurements", o->measurements, "Star-delimited measuring file")->check(CLI::ExistingFile);
        sub->add_option("--csv", o->csv, "Machining CSV files or directories, in part order");
        sub->add_option("--select", o->select, "MM1..MM3, a test name, manual or automatic");
        sub->add_option("--shift", o->shift, "Manual measurement correction from:to:offset");
        sub->add_option("--min-points", o->min_points, "Minimum rows per log");
        sub->add_flag("--exclusive", o->exclusive, "Require more than --min-points rows");
        sub->add_option("-o,--out", o->output, "Output CSV (default $PROCMINE_OUT_DIR/labels.csv)");
        sub->callback([&, o] { action = [&ctx, o] { return labels(ctx, *o); }; });
    }
    {
        auto o = std::make_shared<ClusterOpts>();
        auto* sub = app.add_subcommand("cluster", "Hierarchical or k-means clustering of a feature matrix");
        sub->add_option("--features", o->features, "Feature CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--labels", o->labels, "Label CSV for cluster accuracy")->check(CLI::ExistingFile);
        sub->add_option("--method", o->method, "Clustering method")->check(CLI::IsMember({"hclust", "kmeans"}));
        sub->add_option("--k", o->ks, "Cluster counts, e.g. 2,7,18");
        sub->add_option("--seed", o->seed, "Random seed");
        sub->add_option("--restarts", o->restarts, "k-means restarts");
        sub->add_option("--scree", o->scree, "Also write the WSS curve for k = 1..N");
        sub->add_option("-o,--out", o->output, "Output JSON (default $PROCMINE_OUT_DIR/cluster.json)");
        sub->callback([&, o] { action = [&ctx, o] { return cluster_cmd(ctx, *o); }; });
    }
    {
        auto o = std::make_shared<ClassifyOpts>();
        auto* sub = app.add_subcommand("classify", "Train and evaluate an SVM or naive Bayes classifier");
        sub->add_option("--features", o->features, "Feature CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--labels", o->labels, "Label CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--model", o->model, "Classifier")->check(CLI::IsMember({"svm", "nb"}));
        sub->add_option("--kernel", o->kernel, "SVM kernel")
            ->check(CLI::IsMember({"linear", "radial", "sigmoid", "polynomial"}));
        sub->add_option("--cost", o->cost, "SVM cost");
        sub->add_option("--gamma", o->gamma, "SVM gamma (default 1/#features)");
        sub->add_option("--degree", o->degree, "Polynomial degree");
        sub->add_option("--coef0", o->coef0, "Polynomial/sigmoid offset");
        sub->add_flag("--no-scale", o->no_scale, "Do not standardize features");
        sub->add_option("--split", o->split, "Training fraction");
        sub->add_option("--seed", o->seed, "Random seed");
        sub->add_option("-o,--out", o->output, "Output JSON (default $PROCMINE_OUT_DIR/classify.json)");
        sub->callback([&, o] { action = [&ctx, o] { return classify_cmd(ctx, *o); }; });
    }
    {
        auto o = std::make_shared<RfeOpts>();
        auto* sub = app.add_subcommand("rfe", "Recursive feature elimination with random forests");
        sub->add_option("--features", o->features, "Feature CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--labels", o->labels, "Label CSV")->required()->check(CLI::ExistingFile);
        sub->add_option("--sizes", o->sizes, "Subset sizes, e.g. 1..70 (default all)");
        sub->add_option("--folds", o->folds, "Cross-validation folds");
        sub->add_option("--trees", o->trees, "Trees per forest");
        sub->add_option("--seed", o->seed, "Random seed");
        sub->add_option("-o,--out", o->output, "Output profile CSV (default $PROCMINE_OUT_DIR/rfe.csv)");
        sub->callback([&, o] { action = [&ctx, o] { return rfe_cmd(ctx, *o); }; });
    }
    {
        auto o = std::make_shared<StatsOpts>();
        auto* sub = app.add_subcommand("stats", "Pass counts per test and manual vs automatic acceptance");
        sub->add_option("--measurements", o->measurements, "Star-delimited measuring file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--shift", o->shift, "Manual measurement correction from:to:offset");
        sub->add_option("--csv", o->csv, "Machining CSVs in part order; restricts to usable logs");
        sub->add_option("--min-points", o->min_points, "Minimum rows per log");
        sub->add_flag("--exclusive", o->exclusive, "Require more than --min-points rows");
        sub->add_option("-o,--out", o->output, "Output CSV (default $PROCMINE_OUT_DIR/stats.csv)");
        sub->callback([&, o] { action = [&ctx, o] { return stats_cmd(ctx, *o); }; });
    }
}

}  // namespace procmine::cli
