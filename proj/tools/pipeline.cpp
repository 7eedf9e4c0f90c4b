#include "pipeline.hpp"

#include "procmine/analytics/common.hpp"
#include "procmine/error.hpp"

namespace procmine::cli {

using namespace procmine::analytics;

std::string bool_text(bool b) { return b ? "true" : "false"; }
std::string num(double v) { return format_number(v); }

ClassifyResult classify(const Matrix& x, const Labels& y, const ModelSpec& spec, double ratio, std::uint64_t seed) {
    ClassifyResult r;
    r.split = split_train_test(x.rows, ratio, seed);
    Matrix xtr = x.select_rows(r.split.train), xte = x.select_rows(r.split.test);
    Labels ytr = select(y, r.split.train), yte = select(y, r.split.test);
    ClassifierModel model;
    if (spec.model == "svm") {
        auto m = train_svm(xtr, ytr, spec.svm);
        r.kernel = to_string(m.kernel);
        r.gamma = m.gamma;
        r.cost = m.cost;
        r.support_vectors = m.support_vector_count();
        r.kkt_residual = m.kkt_residual;
        r.converged = m.converged;
        model = std::move(m);
    } else if (spec.model == "nb") {
        model = train_naive_bayes(xtr, ytr);
    } else {
        throw ValidationError("unknown model '" + spec.model + "' (expected svm or nb)");
    }
    r.model = spec.model;
    auto ptr = predict(model, xtr, &ytr);
    auto pte = predict(model, xte, &yte);
    r.train_pred = ptr.predictions;
    r.test_pred = pte.predictions;
    r.train_accuracy = *ptr.accuracy;
    r.test_accuracy = *pte.accuracy;
    r.train_confusion = confusion(r.train_pred, ytr);
    r.test_confusion = confusion(r.test_pred, yte);
    return r;
}

namespace {

Json confusion_json(const std::array<std::array<std::size_t, 2>, 2>& c) {
    return {{"true_true", c[1][1]}, {"true_false", c[1][0]}, {"false_true", c[0][1]}, {"false_false", c[0][0]}};
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += s + ",";
    return out;
}

}  // namespace

Json to_json(const ClassifyResult& r) {
    Json j;
    j["model"] = r.model;
    if (r.model == "svm") {
        j["kernel"] = r.kernel;
        j["cost"] = r.cost;
        j["gamma"] = r.gamma;
        j["support_vectors"] = r.support_vectors;
        j["kkt_residual"] = r.kkt_residual;
        j["converged"] = r.converged;
    }
    j["train_size"] = r.split.train.size();
    j["test_size"] = r.split.test.size();
    j["train_accuracy"] = r.train_accuracy;
    j["test_accuracy"] = r.test_accuracy;
    // keys read <truth>_<predicted>
    j["train_confusion"] = confusion_json(r.train_confusion);
    j["test_confusion"] = confusion_json(r.test_confusion);
    return j;
}

std::string predictions_csv(const ClassifyResult& r, const std::vector<std::string>& ids, const Labels& y) {
    std::string out = "log,set,label,predicted\n";
    for (std::size_t i = 0; i < r.split.train.size(); ++i) {
        auto row = r.split.train[i];
        out += delimited_row({ids[row], "train", bool_text(y[row]), bool_text(r.train_pred[i])}, ',');
    }
    for (std::size_t i = 0; i < r.split.test.size(); ++i) {
        auto row = r.split.test[i];
        out += delimited_row({ids[row], "test", bool_text(y[row]), bool_text(r.test_pred[i])}, ',');
    }
    return out;
}

std::string classification_header(const std::vector<std::string>& leading) {
    return join(leading) +
           "model,kernel,cost,gamma,support_vectors,kkt_residual,train_size,test_size,train_accuracy,test_accuracy,"
           "test_pred_true,test_pred_false\n";
}

std::string classification_row(const std::vector<std::string>& leading, const ClassifyResult& r) {
    std::size_t pred_true = r.test_confusion[0][1] + r.test_confusion[1][1];
    std::size_t pred_false = r.test_confusion[0][0] + r.test_confusion[1][0];
    bool svm = r.model == "svm";
    std::vector<std::string> f = leading;
    f.insert(f.end(), {r.model, r.kernel, svm ? num(r.cost) : "", svm ? num(r.gamma) : "",
                       svm ? std::to_string(r.support_vectors) : "", svm ? num(r.kkt_residual) : "",
                       std::to_string(r.split.train.size()), std::to_string(r.split.test.size()), num(r.train_accuracy),
                       num(r.test_accuracy), std::to_string(pred_true), std::to_string(pred_false)});
    return delimited_row(f, ',');
}

ClusterRun cluster(const Matrix& x, const std::string& method, std::size_t k, std::uint64_t seed, std::size_t restarts,
                   const Labels* labels) {
    ClusterRun r;
    if (method == "hclust") {
        r.result = hierarchical_cluster(x, k);
    } else if (method == "kmeans") {
        KmeansOptions opt;
        opt.restarts = restarts;
        r.result = kmeans_cluster(x, k, seed, opt);
    } else {
        throw ValidationError("unknown clustering method '" + method + "' (expected hclust or kmeans)");
    }
    if (labels) r.accuracy = cluster_accuracy(r.result.assignments, *labels);
    return r;
}

Json to_json(const ClusterRun& r, const std::vector<std::string>& ids) {
    Json j;
    j["method"] = r.result.method == ClusterMethod::hierarchical ? "hclust" : "kmeans";
    if (r.result.method == ClusterMethod::hierarchical) j["linkage"] = "complete";
    else {
        j["seed"] = r.result.seed;
        j["restarts"] = r.result.restarts;
    }
    j["k"] = r.result.k;
    j["wss"] = r.result.wss;
    if (!r.result.silhouette.empty()) j["average_silhouette"] = r.result.average_silhouette;
    Json rows = Json::array();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        Json row{{"log", ids[i]}, {"cluster", r.result.assignments[i] + 1}};
        if (!r.result.silhouette.empty()) row["silhouette"] = r.result.silhouette[i];
        rows.push_back(row);
    }
    j["assignments"] = rows;
    if (r.accuracy) {
        j["accuracy"] = r.accuracy->accuracy;
        Json cl = Json::array();
        for (auto l : r.accuracy->cluster_labels) cl.push_back(l == 1);
        j["cluster_labels"] = cl;
        Json ties = Json::array();
        for (auto t : r.accuracy->ties) ties.push_back(t + 1);
        j["tie_clusters"] = ties;
    }
    return j;
}

std::string clustering_header(const std::vector<std::string>& leading) {
    return join(leading) + "method,k,wss,average_silhouette,accuracy,tie_clusters\n";
}

std::string clustering_row(const std::vector<std::string>& leading, const ClusterRun& r) {
    std::vector<std::string> f = leading;
    f.push_back(r.result.method == ClusterMethod::hierarchical ? "hclust" : "kmeans");
    f.push_back(std::to_string(r.result.k));
    f.push_back(num(r.result.wss));
    f.push_back(r.result.silhouette.empty() ? "" : num(r.result.average_silhouette));
    f.push_back(r.accuracy ? num(r.accuracy->accuracy) : "");
    f.push_back(r.accuracy ? std::to_string(r.accuracy->ties.size()) : "");
    return delimited_row(f, ',');
}

std::string silhouette_header(const std::vector<std::string>& leading) {
    return join(leading) + "method,k,log,cluster,silhouette\n";
}

std::string silhouette_rows(const std::vector<std::string>& leading, const ClusterRun& r,
                            const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        std::vector<std::string> f = leading;
        f.push_back(r.result.method == ClusterMethod::hierarchical ? "hclust" : "kmeans");
        f.push_back(std::to_string(r.result.k));
        f.push_back(ids[i]);
        f.push_back(std::to_string(r.result.assignments[i] + 1));
        f.push_back(r.result.silhouette.empty() ? "" : num(r.result.silhouette[i]));
        out += delimited_row(f, ',');
    }
    return out;
}

std::string scree_csv(const std::vector<ScreePoint>& points) {
    std::string out = "k,wss\n";
    for (const auto& p : points) out += delimited_row({std::to_string(p.k), num(p.wss)}, ',');
    return out;
}

Json to_json(const RfeResult& r) {
    Json j;
    Json profile = Json::array();
    for (const auto& p : r.profile) profile.push_back({{"variables", p.size}, {"rmse", p.rmse}, {"rmse_sd", p.rmse_sd}});
    j["profile"] = profile;
    j["best_size"] = r.best_size;
    j["selected"] = r.selected;
    j["ranking"] = r.ranking;
    return j;
}

}  // namespace procmine::cli
