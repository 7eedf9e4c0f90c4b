#include <doctest.h>

#include <algorithm>

#include "procmine/analytics/forest.hpp"
#include "procmine/error.hpp"

using namespace procmine;
using namespace procmine::analytics;

namespace {

Matrix noise(Rng& rng, std::size_t n, std::size_t p) {
    Matrix x(n, p);
    for (auto& v : x.values) v = uniform01(rng);
    return x;
}

std::vector<std::string> names(std::size_t p) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < p; ++j) out.push_back("f" + std::to_string(j + 1));
    return out;
}

}  // namespace

TEST_CASE("forest fits a step") {
    Rng rng(1);
    auto x = noise(rng, 200, 4);
    std::vector<double> y(200);
    for (std::size_t i = 0; i < 200; ++i) y[i] = x(i, 2) > 0.5 ? 1.0 : 0.0;
    auto f = train_forest(x, y, 3);
    CHECK(f.trees.size() == 100);
    CHECK(f.features == 4);
    CHECK(rank_features(f.importance).front() == 2);
    CHECK(f.oob_mse < 0.5 * 0.25);
    Matrix q(2, 4, 0.5);
    q(0, 2) = 0.9;
    q(1, 2) = 0.1;
    auto p = f.predict(q);
    CHECK(p[0] > 0.8);
    CHECK(p[1] < 0.2);

    auto again = train_forest(x, y, 3);
    CHECK(again.importance == f.importance);
    CHECK(again.predict(q) == p);
    CHECK_THROWS_AS(f.predict(Matrix(1, 3)), ValidationError);
    CHECK_THROWS_AS(train_forest(x, std::vector<double>(5), 1), ValidationError);
    ForestParams none;
    none.trees = 0;
    CHECK_THROWS_AS(train_forest(x, y, 1, none), ValidationError);
}

TEST_CASE("rank_features keeps column order on ties") {
    CHECK(rank_features({0.1, 0.5, 0.1, 0.5}) == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("rfe finds the informative feature") {
    Rng rng(2);
    auto x = noise(rng, 120, 6);
    Labels y(120);
    for (std::size_t i = 0; i < 120; ++i) y[i] = x(i, 4) > 0.5;
    RfeOptions opt;
    opt.forest.trees = 60;
    auto r = rfe_select(x, y, names(6), 9, opt);
    CHECK(r.ranking.front() == "f5");
    REQUIRE(r.profile.size() == 6);
    CHECK(r.profile.front().size == 1);
    CHECK(r.best_size >= 1);
    CHECK(std::find(r.selected.begin(), r.selected.end(), "f5") != r.selected.end());
    CHECK(r.selected.size() == r.best_size);
    auto best = std::min_element(r.profile.begin(), r.profile.end(),
                                 [](const RfePoint& a, const RfePoint& b) { return a.rmse < b.rmse; });
    CHECK(best->size == r.best_size);

    auto csv = rfe_profile_csv(r);
    CHECK(csv.rfind("variables,rmse,rmse_sd,selected\n", 0) == 0);
    CHECK(rfe_select(x, y, names(6), 9, opt).ranking == r.ranking);
}

TEST_CASE("rfe with one subset size") {
    Rng rng(3);
    auto x = noise(rng, 40, 3);
    Labels y(40);
    for (std::size_t i = 0; i < 40; ++i) y[i] = static_cast<int>(i % 2);
    RfeOptions opt;
    opt.sizes = {3};
    opt.forest.trees = 20;
    auto r = rfe_select(x, y, names(3), 1, opt);
    REQUIRE(r.profile.size() == 1);
    CHECK(r.best_size == 3);
    CHECK(r.selected.size() == 3);
}

TEST_CASE("rfe preconditions") {
    Rng rng(4);
    auto x = noise(rng, 20, 3);
    CHECK_THROWS_AS(rfe_select(x, Labels(20, 1), names(3), 1), ValidationError);
    Labels y(20);
    y[0] = 1;
    RfeOptions opt;
    opt.sizes = {4};
    CHECK_THROWS_AS(rfe_select(x, y, names(3), 1, opt), ValidationError);
    CHECK_THROWS_AS(rfe_select(x, y, names(2), 1), ValidationError);
    opt.sizes = {};
    opt.folds = 1;
    CHECK_THROWS_AS(rfe_select(x, y, names(3), 1, opt), ValidationError);
}
