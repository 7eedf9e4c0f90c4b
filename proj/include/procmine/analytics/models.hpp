#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "procmine/analytics/common.hpp"

namespace procmine::analytics {

enum class Kernel { linear, radial, sigmoid, polynomial };

Kernel parse_kernel(const std::string& s);
std::string to_string(Kernel k);

struct SvmParams {
    Kernel kernel = Kernel::radial;
    double cost = 1.0;
    std::optional<double> gamma;  // default 1 / #features
    int degree = 3;
    double coef0 = 0.0;
    bool scale = true;
    double tolerance = 1e-3;
    std::size_t max_iterations = 10'000'000;
};

/// Per-feature standardization from training statistics. Constant features
/// are only centered.
struct Scaler {
    std::vector<double> mean;
    std::vector<double> sd;

    static Scaler fit(const Matrix& x);
    Matrix apply(const Matrix& x) const;
};

struct SvmModel {
    Kernel kernel = Kernel::radial;
    double cost = 1.0;
    double gamma = 0.0;
    int degree = 3;
    double coef0 = 0.0;
    std::optional<Scaler> scaler;
    Matrix support_vectors;       // scaled space
    std::vector<double> coef;     // alpha_i * y_i
    double rho = 0.0;             // decision = sum coef_i K(sv_i, x) - rho
    std::size_t iterations = 0;
    double kkt_residual = 0.0;    // max violation m(a) - M(a) at exit
    bool converged = false;

    std::size_t features() const { return scaler ? scaler->mean.size() : support_vectors.cols; }
    std::size_t support_vector_count() const { return support_vectors.rows; }
};

/// Soft-margin C-SVC trained with SMO (maximal-violating-pair working set,
/// second-order selection). Label 1 is the positive class.
SvmModel train_svm(const Matrix& x, const Labels& y, const SvmParams& params = {});
std::vector<double> decision_values(const SvmModel& model, const Matrix& x);

struct NaiveBayesModel {
    std::array<double, 2> prior{};               // index = class label
    std::array<std::vector<double>, 2> mean;
    std::array<std::vector<double>, 2> variance; // floored
    double variance_floor = 1e-9;

    std::size_t features() const { return mean[0].size(); }
};

/// Gaussian naive Bayes. Per-class variances are the unbiased sample
/// variance, raised to `variance_floor` where smaller.
NaiveBayesModel train_naive_bayes(const Matrix& x, const Labels& y, double variance_floor = 1e-9);
/// log P(class) + sum log N(x_j; mean, var), per row, per class.
std::vector<std::array<double, 2>> log_posteriors(const NaiveBayesModel& model, const Matrix& x);

using ClassifierModel = std::variant<SvmModel, NaiveBayesModel>;

struct Prediction {
    Labels predictions;
    std::optional<double> accuracy;
};

Prediction predict(const ClassifierModel& model, const Matrix& x, const Labels* labels = nullptr);
double accuracy(const Labels& predicted, const Labels& truth);

/// 2x2 counts [truth][predicted].
std::array<std::array<std::size_t, 2>, 2> confusion(const Labels& predicted, const Labels& truth);

}  // namespace procmine::analytics
