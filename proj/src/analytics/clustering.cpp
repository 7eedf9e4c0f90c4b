#include "procmine/analytics/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "procmine/error.hpp"

namespace procmine::analytics {

namespace {

void check_k(const Matrix& x, std::size_t k) {
    if (k == 0) throw ValidationError("k must be positive");
    if (k > x.rows) {
        throw ValidationError("k = " + std::to_string(k) + " exceeds the number of rows (" + std::to_string(x.rows) + ")");
    }
}

// renumber clusters by the first row that uses them
std::vector<std::size_t> canonical(const std::vector<std::size_t>& a, std::vector<std::size_t>* order = nullptr) {
    std::map<std::size_t, std::size_t> remap;
    std::vector<std::size_t> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [it, inserted] = remap.emplace(a[i], remap.size());
        if (inserted && order) order->push_back(a[i]);
        out[i] = it->second;
    }
    return out;
}

Matrix means_of(const Matrix& x, const std::vector<std::size_t>& a, std::size_t k, std::vector<std::size_t>& sizes) {
    Matrix c(k, x.cols);
    sizes.assign(k, 0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        ++sizes[a[r]];
        auto row = x.row(r);
        auto dst = c.row(a[r]);
        for (std::size_t j = 0; j < x.cols; ++j) dst[j] += row[j];
    }
    for (std::size_t q = 0; q < k; ++q) {
        if (!sizes[q]) continue;
        for (auto& v : c.row(q)) v /= static_cast<double>(sizes[q]);
    }
    return c;
}

struct LloydResult {
    std::vector<std::size_t> assignments;
    Matrix centers;
    double wss = 0.0;
};

LloydResult lloyd(const Matrix& x, Matrix centers, std::size_t max_iterations) {
    const std::size_t k = centers.rows;
    std::vector<std::size_t> a(x.rows, k), sizes;
    for (std::size_t it = 0; it < max_iterations; ++it) {
        bool changed = false;
        for (std::size_t r = 0; r < x.rows; ++r) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t q = 0; q < k; ++q) {
                double d = squared_distance(x.row(r), centers.row(q));
                if (d < best_d) {
                    best_d = d;
                    best = q;
                }
            }
            if (a[r] != best) {
                a[r] = best;
                changed = true;
            }
        }
        centers = means_of(x, a, k, sizes);
        // an empty cluster takes the row farthest from its own center
        for (std::size_t q = 0; q < k; ++q) {
            if (sizes[q]) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t r = 0; r < x.rows; ++r) {
                if (sizes[a[r]] < 2) continue;
                double d = squared_distance(x.row(r), centers.row(a[r]));
                if (d > far_d) {
                    far_d = d;
                    far = r;
                }
            }
            a[far] = q;
            centers = means_of(x, a, k, sizes);
            changed = true;
        }
        if (!changed) break;
    }
    LloydResult res{a, centers, within_ss(x, a)};
    return res;
}

Matrix random_centers(const Matrix& x, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(x.rows);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + uniform_index(rng, x.rows - i)]);
    idx.resize(k);
    return x.select_rows(idx);
}

}  // namespace

double within_ss(const Matrix& x, const std::vector<std::size_t>& assignments) {
    if (x.rows == 0) return 0.0;
    std::size_t k = *std::max_element(assignments.begin(), assignments.end()) + 1;
    std::vector<std::size_t> sizes;
    Matrix c = means_of(x, assignments, k, sizes);
    double s = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) s += squared_distance(x.row(r), c.row(assignments[r]));
    return s;
}

ClusteringResult hierarchical_cluster(const Matrix& x, std::size_t k) {
    check_k(x, k);
    const std::size_t n = x.rows;
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = std::sqrt(squared_distance(x.row(i), x.row(j)));
    }
    std::vector<std::size_t> owner(n);
    std::iota(owner.begin(), owner.end(), 0);
    std::vector<char> active(n, 1);
    for (std::size_t clusters = n; clusters > k; --clusters) {
        std::size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (active[j] && d[i * n + j] < best) {
                    best = d[i * n + j];
                    bi = i;
                    bj = j;
                }
            }
        }
        // complete linkage: the merged cluster is as far as its farthest part
        for (std::size_t m = 0; m < n; ++m) {
            if (!active[m] || m == bi || m == bj) continue;
            double v = std::max(d[bi * n + m], d[bj * n + m]);
            d[bi * n + m] = d[m * n + bi] = v;
        }
        active[bj] = 0;
        for (auto& o : owner) {
            if (o == bj) o = bi;
        }
    }
    ClusteringResult res;
    res.method = ClusterMethod::hierarchical;
    res.k = k;
    res.assignments = canonical(owner);
    res.wss = within_ss(x, res.assignments);
    if (k >= 2) {
        auto s = silhouette(x, res.assignments);
        res.silhouette = std::move(s.widths);
        res.average_silhouette = s.average;
    }
    return res;
}

ClusteringResult kmeans_cluster(const Matrix& x, std::size_t k, std::uint64_t seed, const KmeansOptions& options) {
    check_k(x, k);
    std::optional<LloydResult> best;
    auto consider = [&](LloydResult r) {
        if (!best || r.wss < best->wss) best = std::move(r);
    };
    if (options.warm_start) {
        if (options.warm_start->rows != k || options.warm_start->cols != x.cols) {
            throw ValidationError("warm start centers do not match k and the feature count");
        }
        consider(lloyd(x, *options.warm_start, options.max_iterations));
    }
    for (std::size_t r = 0; r < std::max<std::size_t>(1, options.restarts); ++r) {
        Rng rng(derive_seed(seed, r));
        consider(lloyd(x, random_centers(x, k, rng), options.max_iterations));
    }

    ClusteringResult res;
    res.method = ClusterMethod::kmeans;
    res.k = k;
    res.seed = seed;
    res.restarts = options.restarts;
    std::vector<std::size_t> order;
    res.assignments = canonical(best->assignments, &order);
    res.centers = best->centers.select_rows(order);
    res.wss = best->wss;
    if (k >= 2) {
        auto s = silhouette(x, res.assignments);
        res.silhouette = std::move(s.widths);
        res.average_silhouette = s.average;
    }
    return res;
}

Silhouette silhouette(const Matrix& x, const std::vector<std::size_t>& assignments) {
    if (assignments.size() != x.rows) throw ValidationError("assignments and rows differ in length");
    std::map<std::size_t, std::size_t> sizes;
    for (auto a : assignments) ++sizes[a];
    if (sizes.size() < 2) throw ValidationError("silhouette needs at least 2 clusters");
    Silhouette s;
    s.widths.assign(x.rows, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i) {
        if (sizes[assignments[i]] == 1) continue;
        std::map<std::size_t, double> sum;
        for (std::size_t j = 0; j < x.rows; ++j) {
            if (j != i) sum[assignments[j]] += std::sqrt(squared_distance(x.row(i), x.row(j)));
        }
        double a = sum[assignments[i]] / static_cast<double>(sizes[assignments[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [c, total] : sum) {
            if (c != assignments[i]) b = std::min(b, total / static_cast<double>(sizes[c]));
        }
        double m = std::max(a, b);
        s.widths[i] = m > 0.0 ? (b - a) / m : 0.0;
    }
    s.average = std::accumulate(s.widths.begin(), s.widths.end(), 0.0) / static_cast<double>(x.rows);
    return s;
}

std::vector<ScreePoint> scree(const Matrix& x, std::size_t k_max, std::uint64_t seed, std::size_t restarts) {
    check_k(x, k_max);
    std::vector<ScreePoint> out;
    std::optional<ClusteringResult> prev;
    for (std::size_t k = 1; k <= k_max; ++k) {
        KmeansOptions opt;
        opt.restarts = restarts;
        if (prev) {
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t r = 0; r < x.rows; ++r) {
                double d = squared_distance(x.row(r), prev->centers.row(prev->assignments[r]));
                if (d > far_d) {
                    far_d = d;
                    far = r;
                }
            }
            Matrix warm(k, x.cols);
            std::copy(prev->centers.values.begin(), prev->centers.values.end(), warm.values.begin());
            auto src = x.row(far);
            std::copy(src.begin(), src.end(), warm.row(k - 1).begin());
            opt.warm_start = std::move(warm);
        }
        auto res = kmeans_cluster(x, k, seed, opt);
        out.push_back({k, res.wss});
        prev = std::move(res);
    }
    return out;
}

ClusterAccuracy cluster_accuracy(const std::vector<std::size_t>& assignments, const Labels& labels) {
    if (assignments.size() != labels.size()) throw ValidationError("assignments and labels differ in length");
    ClusterAccuracy res;
    if (assignments.empty()) return res;
    std::size_t k = *std::max_element(assignments.begin(), assignments.end()) + 1;
    std::vector<std::array<std::size_t, 2>> counts(k, {0, 0});
    for (std::size_t i = 0; i < labels.size(); ++i) ++counts[assignments[i]][labels[i] ? 1 : 0];
    std::size_t correct = 0;
    res.cluster_labels.assign(k, 1);
    for (std::size_t q = 0; q < k; ++q) {
        if (counts[q][0] + counts[q][1] == 0) continue;
        if (counts[q][0] == counts[q][1]) res.ties.push_back(q);
        res.cluster_labels[q] = counts[q][1] >= counts[q][0] ? 1 : 0;
        correct += counts[q][res.cluster_labels[q]];
    }
    res.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
    return res;
}

}  // namespace procmine::analytics
