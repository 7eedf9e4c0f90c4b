#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procmine/analytics/common.hpp"

namespace procmine::analytics {

enum class ClusterMethod { hierarchical, kmeans };

struct ClusteringResult {
    ClusterMethod method = ClusterMethod::kmeans;
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  // 0-based cluster per row
    std::vector<double> silhouette;        // empty when k < 2
    double average_silhouette = 0.0;
    double wss = 0.0;
    // kmeans only
    std::uint64_t seed = 0;
    std::size_t restarts = 0;
    Matrix centers;
};

/// Within-cluster sum of squared distances to the cluster means.
double within_ss(const Matrix& x, const std::vector<std::size_t>& assignments);

/// Agglomerative clustering, complete linkage, Euclidean distance; the tree
/// is cut at k clusters. Clusters are numbered by first row.
ClusteringResult hierarchical_cluster(const Matrix& x, std::size_t k);

struct KmeansOptions {
    std::size_t restarts = 20;
    std::size_t max_iterations = 100;
    /// Extra start evaluated next to the random ones.
    std::optional<Matrix> warm_start;
};

/// Lloyd iterations from `restarts` random starts (k distinct rows each);
/// the lowest WSS wins, ties go to the earlier start.
ClusteringResult kmeans_cluster(const Matrix& x, std::size_t k, std::uint64_t seed, const KmeansOptions& options = {});

struct Silhouette {
    std::vector<double> widths;
    double average = 0.0;
};

Silhouette silhouette(const Matrix& x, const std::vector<std::size_t>& assignments);

struct ScreePoint {
    std::size_t k;
    double wss;
};

/// WSS for k = 1..k_max. Each k also starts from the k-1 solution plus the
/// row farthest from its center, so the curve never increases.
std::vector<ScreePoint> scree(const Matrix& x, std::size_t k_max, std::uint64_t seed, std::size_t restarts = 20);

struct ClusterAccuracy {
    double accuracy = 0.0;
    std::vector<int> cluster_labels;  // majority label per cluster
    std::vector<std::size_t> ties;    // clusters decided by the tie rule
};

/// Each cluster takes its majority label (ties -> 1).
ClusterAccuracy cluster_accuracy(const std::vector<std::size_t>& assignments, const Labels& labels);

}  // namespace procmine::analytics
