#include "procmine/analytics/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "procmine/error.hpp"

namespace procmine::analytics {

namespace {

struct Builder {
    const Matrix& x;
    const std::vector<double>& y;
    const ForestParams& params;
    std::size_t mtry;
    Rng& rng;
    RegressionTree tree;

    struct Task {
        std::uint32_t node;
        std::vector<std::size_t> rows;
    };

    void build(std::vector<std::size_t> rows) {
        tree.nodes.emplace_back();
        std::vector<Task> stack;
        stack.push_back({0, std::move(rows)});
        std::vector<std::size_t> features(x.cols);
        std::iota(features.begin(), features.end(), 0);
        while (!stack.empty()) {
            Task task = std::move(stack.back());
            stack.pop_back();
            auto& rs = task.rows;
            double sum = 0.0;
            for (auto r : rs) sum += y[r];
            tree.nodes[task.node].value = sum / static_cast<double>(rs.size());
            if (rs.size() <= params.min_node_size) continue;
            bool pure = std::all_of(rs.begin(), rs.end(), [&](std::size_t r) { return y[r] == y[rs.front()]; });
            if (pure) continue;

            for (std::size_t i = 0; i < mtry; ++i) std::swap(features[i], features[i + uniform_index(rng, x.cols - i)]);
            double best_gain = 0.0;
            std::int32_t best_feature = -1;
            double best_threshold = 0.0;
            const double n = static_cast<double>(rs.size());
            std::vector<std::size_t> sorted = rs;
            for (std::size_t fi = 0; fi < mtry; ++fi) {
                std::size_t f = features[fi];
                std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                    return x(a, f) < x(b, f) || (x(a, f) == x(b, f) && a < b);
                });
                double left = 0.0;
                for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                    left += y[sorted[i]];
                    double lo = x(sorted[i], f), hi = x(sorted[i + 1], f);
                    if (!(lo < hi)) continue;
                    double nl = static_cast<double>(i + 1), nr = n - nl;
                    double right = sum - left;
                    double gain = left * left / nl + right * right / nr - sum * sum / n;
                    if (gain > best_gain + 1e-12) {
                        best_gain = gain;
                        best_feature = static_cast<std::int32_t>(f);
                        best_threshold = lo + (hi - lo) / 2.0;
                        if (!(best_threshold < hi)) best_threshold = lo;
                    }
                }
            }
            if (best_feature < 0) continue;
            std::vector<std::size_t> l, r;
            for (auto row : rs) (x(row, static_cast<std::size_t>(best_feature)) <= best_threshold ? l : r).push_back(row);
            auto li = static_cast<std::uint32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& node = tree.nodes[task.node];
            node.feature = best_feature;
            node.threshold = best_threshold;
            node.left = li;
            node.right = li + 1;
            stack.push_back({li + 1, std::move(r)});
            stack.push_back({li, std::move(l)});
        }
    }
};

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double RegressionTree::predict(std::span<const double> row) const {
    std::uint32_t i = 0;
    while (nodes[i].feature >= 0) {
        i = row[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    }
    return nodes[i].value;
}

double RandomForest::predict(std::span<const double> row) const {
    double s = 0.0;
    for (const auto& t : trees) s += t.predict(row);
    return trees.empty() ? 0.0 : s / static_cast<double>(trees.size());
}

std::vector<double> RandomForest::predict(const Matrix& x) const {
    if (x.rows && x.cols != features) throw ValidationError("forest expects " + std::to_string(features) + " features");
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = predict(x.row(r));
    return out;
}

RandomForest train_forest(const Matrix& x, const std::vector<double>& y, std::uint64_t seed,
                          const ForestParams& params) {
    if (x.rows != y.size() || x.rows == 0 || x.cols == 0) throw ValidationError("forest needs a non-empty training set");
    if (params.trees == 0) throw ValidationError("forest needs at least one tree");
    RandomForest forest;
    forest.features = x.cols;
    forest.importance.assign(x.cols, 0.0);
    const std::size_t mtry = std::clamp<std::size_t>(params.mtry.value_or(std::max<std::size_t>(1, x.cols / 3)), 1, x.cols);
    std::size_t oob_trees = 0;
    double oob_total = 0.0;
    Matrix scratch;

    for (std::size_t t = 0; t < params.trees; ++t) {
        Rng rng(derive_seed(seed, t));
        std::vector<std::size_t> sample(x.rows);
        std::vector<char> in_bag(x.rows, 0);
        for (auto& s : sample) {
            s = uniform_index(rng, x.rows);
            in_bag[s] = 1;
        }
        Builder b{x, y, params, mtry, rng, {}};
        b.build(std::move(sample));
        forest.trees.push_back(std::move(b.tree));
        const auto& tree = forest.trees.back();

        std::vector<std::size_t> oob;
        for (std::size_t r = 0; r < x.rows; ++r) {
            if (!in_bag[r]) oob.push_back(r);
        }
        if (oob.empty()) continue;
        ++oob_trees;
        scratch = x.select_rows(oob);
        double base = 0.0;
        for (std::size_t i = 0; i < oob.size(); ++i) {
            double e = tree.predict(scratch.row(i)) - y[oob[i]];
            base += e * e;
        }
        base /= static_cast<double>(oob.size());
        oob_total += base;
        std::vector<std::size_t> perm(oob.size());
        for (std::size_t f = 0; f < x.cols; ++f) {
            std::iota(perm.begin(), perm.end(), 0);
            shuffle(perm, rng);
            double mse = 0.0;
            std::vector<double> row(x.cols);
            for (std::size_t i = 0; i < oob.size(); ++i) {
                auto src = scratch.row(i);
                std::copy(src.begin(), src.end(), row.begin());
                row[f] = scratch(perm[i], f);
                double e = tree.predict(row) - y[oob[i]];
                mse += e * e;
            }
            forest.importance[f] += mse / static_cast<double>(oob.size()) - base;
        }
    }
    if (oob_trees) {
        for (auto& v : forest.importance) v /= static_cast<double>(oob_trees);
        forest.oob_mse = oob_total / static_cast<double>(oob_trees);
    }
    return forest;
}

std::vector<std::size_t> rank_features(const std::vector<double>& importance) {
    std::vector<std::size_t> idx(importance.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return importance[a] > importance[b]; });
    return idx;
}

RfeResult rfe_select(const Matrix& x, const Labels& y, const std::vector<std::string>& names, std::uint64_t seed,
                     const RfeOptions& options) {
    if (x.rows != y.size()) throw ValidationError("feature rows and labels differ in length");
    if (names.size() != x.cols) throw ValidationError("feature names and columns differ in count");
    std::size_t positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    if (positives == 0 || positives == y.size()) throw ValidationError("labels are degenerate (a single class)");
    if (options.folds < 2 || options.folds > x.rows) throw ValidationError("fold count must be in [2, rows]");

    std::vector<std::size_t> sizes = options.sizes;
    if (sizes.empty()) {
        sizes.resize(x.cols);
        std::iota(sizes.begin(), sizes.end(), 1);
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    for (auto s : sizes) {
        if (s == 0 || s > x.cols) {
            throw ValidationError("subset size " + std::to_string(s) + " is outside 1.." + std::to_string(x.cols));
        }
    }

    std::vector<double> target(y.begin(), y.end());

    // folds stratified by label
    std::vector<std::size_t> fold(x.rows);
    {
        Rng rng(derive_seed(seed, 0));
        std::size_t next = 0;
        for (int cls = 0; cls < 2; ++cls) {
            std::vector<std::size_t> rows;
            for (std::size_t r = 0; r < x.rows; ++r) {
                if (y[r] == cls) rows.push_back(r);
            }
            shuffle(rows, rng);
            for (auto r : rows) fold[r] = next++ % options.folds;
        }
    }

    std::vector<std::vector<double>> rmse(sizes.size(), std::vector<double>(options.folds, 0.0));
    for (std::size_t f = 0; f < options.folds; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t r = 0; r < x.rows; ++r) (fold[r] == f ? test : train).push_back(r);
        Matrix xtr = x.select_rows(train), xte = x.select_rows(test);
        std::vector<double> ytr, yte;
        for (auto r : train) ytr.push_back(target[r]);
        for (auto r : test) yte.push_back(target[r]);

        auto full = train_forest(xtr, ytr, derive_seed(seed, 1000 + f), options.forest);
        auto order = rank_features(full.importance);
        for (std::size_t si = 0; si < sizes.size(); ++si) {
            std::vector<std::size_t> cols(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(sizes[si]));
            auto forest = train_forest(xtr.select_cols(cols), ytr, derive_seed(seed, 2000 + f * 1000 + si), options.forest);
            auto pred = forest.predict(xte.select_cols(cols));
            double se = 0.0;
            for (std::size_t i = 0; i < pred.size(); ++i) se += (pred[i] - yte[i]) * (pred[i] - yte[i]);
            rmse[si][f] = std::sqrt(se / static_cast<double>(pred.size()));
        }
    }

    RfeResult res;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        double m = mean(rmse[si]);
        double var = 0.0;
        for (double v : rmse[si]) var += (v - m) * (v - m);
        double sd = std::sqrt(var / static_cast<double>(options.folds - 1));
        res.profile.push_back({sizes[si], m, sd});
        if (m < best) {
            best = m;
            res.best_size = sizes[si];
        }
    }
    auto final_forest = train_forest(x, target, derive_seed(seed, 1), options.forest);
    for (auto i : rank_features(final_forest.importance)) res.ranking.push_back(names[i]);
    res.selected.assign(res.ranking.begin(), res.ranking.begin() + static_cast<std::ptrdiff_t>(res.best_size));
    return res;
}

std::string rfe_profile_csv(const RfeResult& r) {
    std::string out = "variables,rmse,rmse_sd,selected\n";
    for (const auto& p : r.profile) {
        out += delimited_row({std::to_string(p.size), format_number(p.rmse), format_number(p.rmse_sd),
                              p.size == r.best_size ? "true" : "false"},
                             ',');
    }
    return out;
}

}  // namespace procmine::analytics
