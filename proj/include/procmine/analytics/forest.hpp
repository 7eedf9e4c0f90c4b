#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procmine/analytics/common.hpp"

namespace procmine::analytics {

struct ForestParams {
    std::size_t trees = 100;
    std::optional<std::size_t> mtry;  // default max(1, p / 3)
    std::size_t min_node_size = 5;    // nodes this small are not split
};

struct RegressionTree {
    struct Node {
        std::int32_t feature = -1;  // -1 for a leaf
        double threshold = 0.0;     // go left when x <= threshold
        std::uint32_t left = 0, right = 0;
        double value = 0.0;
    };
    std::vector<Node> nodes;

    double predict(std::span<const double> row) const;
};

/// Bagged regression trees with per-split feature subsampling.
struct RandomForest {
    std::vector<RegressionTree> trees;
    std::size_t features = 0;
    /// Mean increase of out-of-bag squared error when a feature is permuted.
    std::vector<double> importance;
    double oob_mse = 0.0;

    double predict(std::span<const double> row) const;
    std::vector<double> predict(const Matrix& x) const;
};

RandomForest train_forest(const Matrix& x, const std::vector<double>& y, std::uint64_t seed,
                          const ForestParams& params = {});

/// Feature indices by decreasing importance; ties keep column order.
std::vector<std::size_t> rank_features(const std::vector<double>& importance);

struct RfeOptions {
    std::vector<std::size_t> sizes;  // empty: every size 1..p
    std::size_t folds = 5;
    ForestParams forest;
};

struct RfePoint {
    std::size_t size;
    double rmse;     // mean over folds
    double rmse_sd;  // across folds
};

struct RfeResult {
    std::vector<RfePoint> profile;  // ascending size
    std::size_t best_size = 0;
    std::vector<std::string> ranking;   // all features, most important first
    std::vector<std::string> selected;  // first best_size of the ranking
};

/// Recursive feature elimination with random-forest regression on the 0/1
/// labels. Each fold ranks the features on its training part once and scores
/// the top-s subsets on the held-out part by RMSE. The smallest size with the
/// lowest mean RMSE wins; the final ranking comes from a forest on all rows.
RfeResult rfe_select(const Matrix& x, const Labels& y, const std::vector<std::string>& names, std::uint64_t seed,
                     const RfeOptions& options = {});

std::string rfe_profile_csv(const RfeResult& r);

}  // namespace procmine::analytics
