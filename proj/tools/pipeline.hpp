#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procmine/analytics/clustering.hpp"
#include "procmine/analytics/forest.hpp"
#include "procmine/analytics/labels.hpp"
#include "procmine/analytics/models.hpp"
#include "support.hpp"

namespace procmine::cli {

struct ModelSpec {
    std::string model = "svm";  // svm | nb
    analytics::SvmParams svm;
};

struct ClassifyResult {
    std::string model;
    std::string kernel;  // empty for naive Bayes
    double gamma = 0.0;
    double cost = 0.0;
    std::size_t support_vectors = 0;
    double kkt_residual = 0.0;
    bool converged = true;
    analytics::Split split;
    analytics::Labels train_pred, test_pred;
    double train_accuracy = 0.0, test_accuracy = 0.0;
    std::array<std::array<std::size_t, 2>, 2> train_confusion{}, test_confusion{};
};

ClassifyResult classify(const analytics::Matrix& x, const analytics::Labels& y, const ModelSpec& spec, double ratio,
                        std::uint64_t seed);

Json to_json(const ClassifyResult& r);
std::string predictions_csv(const ClassifyResult& r, const std::vector<std::string>& ids, const analytics::Labels& y);

/// Columns shared by every classification summary table.
std::string classification_header(const std::vector<std::string>& leading);
std::string classification_row(const std::vector<std::string>& leading, const ClassifyResult& r);

struct ClusterRun {
    analytics::ClusteringResult result;
    std::optional<analytics::ClusterAccuracy> accuracy;
};

ClusterRun cluster(const analytics::Matrix& x, const std::string& method, std::size_t k, std::uint64_t seed,
                   std::size_t restarts, const analytics::Labels* labels);

Json to_json(const ClusterRun& r, const std::vector<std::string>& ids);
std::string clustering_header(const std::vector<std::string>& leading);
std::string clustering_row(const std::vector<std::string>& leading, const ClusterRun& r);
std::string silhouette_header(const std::vector<std::string>& leading);
std::string silhouette_rows(const std::vector<std::string>& leading, const ClusterRun& r,
                            const std::vector<std::string>& ids);
std::string scree_csv(const std::vector<analytics::ScreePoint>& points);

Json to_json(const analytics::RfeResult& r);

/// Measurement rows of the given logs (matched by input position); rows
/// without MM1 are dropped.
analytics::MeasurementTable restrict_to_logs(const analytics::MeasurementTable& table,
                                             const std::vector<analytics::MachiningSeries>& logs,
                                             std::vector<std::string>* warnings);
std::string confusion_csv(const analytics::MeasurementStats& st);

std::string bool_text(bool b);
std::string num(double v);

}  // namespace procmine::cli
