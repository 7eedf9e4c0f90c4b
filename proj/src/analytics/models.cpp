#include "procmine/analytics/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "procmine/error.hpp"
#include "procmine/overloaded.hpp"

namespace procmine::analytics {

namespace {

constexpr double kTau = 1e-12;

void check_training_set(const Matrix& x, const Labels& y) {
    if (x.rows != y.size()) throw ValidationError("feature rows and labels differ in length");
    if (x.rows == 0 || x.cols == 0) throw ValidationError("empty training set");
    bool seen[2] = {false, false};
    for (int v : y) {
        if (v != 0 && v != 1) throw ValidationError("labels must be 0 or 1");
        seen[v] = true;
    }
    if (!seen[0] || !seen[1]) throw ValidationError("training labels contain a single class");
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double kernel_value(const SvmModel& m, std::span<const double> a, std::span<const double> b) {
    switch (m.kernel) {
        case Kernel::linear: return dot(a, b);
        case Kernel::radial: return std::exp(-m.gamma * squared_distance(a, b));
        case Kernel::polynomial: return std::pow(m.gamma * dot(a, b) + m.coef0, m.degree);
        case Kernel::sigmoid: return std::tanh(m.gamma * dot(a, b) + m.coef0);
    }
    return 0.0;
}

}  // namespace

Kernel parse_kernel(const std::string& s) {
    if (s == "linear") return Kernel::linear;
    if (s == "radial") return Kernel::radial;
    if (s == "sigmoid") return Kernel::sigmoid;
    if (s == "polynomial") return Kernel::polynomial;
    throw ValidationError("unknown kernel '" + s + "' (expected linear, radial, sigmoid or polynomial)");
}

std::string to_string(Kernel k) {
    switch (k) {
        case Kernel::linear: return "linear";
        case Kernel::radial: return "radial";
        case Kernel::sigmoid: return "sigmoid";
        case Kernel::polynomial: return "polynomial";
    }
    return {};
}

Scaler Scaler::fit(const Matrix& x) {
    Scaler s;
    s.mean.assign(x.cols, 0.0);
    s.sd.assign(x.cols, 1.0);
    for (std::size_t c = 0; c < x.cols; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) sum += x(r, c);
        double mean = sum / static_cast<double>(x.rows);
        double ss = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
        double sd = x.rows > 1 ? std::sqrt(ss / static_cast<double>(x.rows - 1)) : 0.0;
        s.mean[c] = mean;
        s.sd[c] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

Matrix Scaler::apply(const Matrix& x) const {
    Matrix out = x;
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) out(r, c) = (x(r, c) - mean[c]) / sd[c];
    }
    return out;
}

SvmModel train_svm(const Matrix& x_raw, const Labels& labels, const SvmParams& params) {
    check_training_set(x_raw, labels);
    if (!(params.cost > 0.0)) throw ValidationError("SVM cost must be positive");
    SvmModel model;
    model.kernel = params.kernel;
    model.cost = params.cost;
    model.gamma = params.gamma.value_or(1.0 / static_cast<double>(x_raw.cols));
    if (!(model.gamma > 0.0)) throw ValidationError("SVM gamma must be positive");
    model.degree = params.degree;
    model.coef0 = params.coef0;
    if (params.scale) model.scaler = Scaler::fit(x_raw);
    const Matrix x = model.scaler ? model.scaler->apply(x_raw) : x_raw;

    const std::size_t n = x.rows;
    const double c = params.cost;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == 1 ? 1.0 : -1.0;

    // Q_ij = y_i y_j K(x_i, x_j), kept whole
    std::vector<double> q(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double v = y[i] * y[j] * kernel_value(model, x.row(i), x.row(j));
            q[i * n + j] = v;
            q[j * n + i] = v;
        }
    }
    auto Q = [&](std::size_t i, std::size_t j) { return q[i * n + j]; };

    std::vector<double> alpha(n, 0.0), grad(n, -1.0);
    auto up = [&](std::size_t t) { return y[t] > 0 ? alpha[t] < c : alpha[t] > 0; };
    auto low = [&](std::size_t t) { return y[t] > 0 ? alpha[t] > 0 : alpha[t] < c; };

    double gap = std::numeric_limits<double>::infinity();
    std::size_t iter = 0;
    for (;; ++iter) {
        double gmax = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t i = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (up(t) && -y[t] * grad[t] >= gmax) {
                gmax = -y[t] * grad[t];
                i = static_cast<std::ptrdiff_t>(t);
            }
        }
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_obj = std::numeric_limits<double>::infinity();
        std::ptrdiff_t j = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (!low(t)) continue;
            double v = y[t] * grad[t];
            gmax2 = std::max(gmax2, v);
            if (i < 0) continue;
            double b = gmax + v;
            if (b > 0) {
                auto iu = static_cast<std::size_t>(i);
                double a = Q(iu, iu) + Q(t, t) - 2.0 * y[iu] * y[t] * Q(iu, t);
                if (a <= 0) a = kTau;
                double obj = -(b * b) / a;
                if (obj <= best_obj) {
                    best_obj = obj;
                    j = static_cast<std::ptrdiff_t>(t);
                }
            }
        }
        gap = gmax + gmax2;
        if (gap < params.tolerance || j < 0 || i < 0) {
            model.converged = true;
            break;
        }
        if (iter >= params.max_iterations) break;

        auto iu = static_cast<std::size_t>(i), ju = static_cast<std::size_t>(j);
        double old_i = alpha[iu], old_j = alpha[ju];
        if (y[iu] != y[ju]) {
            double quad = Q(iu, iu) + Q(ju, ju) + 2.0 * Q(iu, ju);
            if (quad <= 0) quad = kTau;
            double delta = (-grad[iu] - grad[ju]) / quad;
            double diff = alpha[iu] - alpha[ju];
            alpha[iu] += delta;
            alpha[ju] += delta;
            if (diff > 0) {
                if (alpha[ju] < 0) {
                    alpha[ju] = 0;
                    alpha[iu] = diff;
                }
            } else if (alpha[iu] < 0) {
                alpha[iu] = 0;
                alpha[ju] = -diff;
            }
            if (diff > 0) {
                if (alpha[iu] > c) {
                    alpha[iu] = c;
                    alpha[ju] = c - diff;
                }
            } else if (alpha[ju] > c) {
                alpha[ju] = c;
                alpha[iu] = c + diff;
            }
        } else {
            double quad = Q(iu, iu) + Q(ju, ju) - 2.0 * Q(iu, ju);
            if (quad <= 0) quad = kTau;
            double delta = (grad[iu] - grad[ju]) / quad;
            double sum = alpha[iu] + alpha[ju];
            alpha[iu] -= delta;
            alpha[ju] += delta;
            if (sum > c) {
                if (alpha[iu] > c) {
                    alpha[iu] = c;
                    alpha[ju] = sum - c;
                }
            } else if (alpha[ju] < 0) {
                alpha[ju] = 0;
                alpha[iu] = sum;
            }
            if (sum > c) {
                if (alpha[ju] > c) {
                    alpha[ju] = c;
                    alpha[iu] = sum - c;
                }
            } else if (alpha[iu] < 0) {
                alpha[iu] = 0;
                alpha[ju] = sum;
            }
        }
        double di = alpha[iu] - old_i, dj = alpha[ju] - old_j;
        for (std::size_t t = 0; t < n; ++t) grad[t] += Q(iu, t) * di + Q(ju, t) * dj;
    }
    model.iterations = iter;
    model.kkt_residual = std::max(gap, 0.0);

    // offset: mean over free vectors, else midpoint of the feasible interval
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    std::size_t free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        double yg = y[t] * grad[t];
        if (alpha[t] >= c) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++free;
            sum_free += yg;
        }
    }
    model.rho = free ? sum_free / static_cast<double>(free) : (ub + lb) / 2.0;

    std::vector<std::size_t> sv;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0) {
            sv.push_back(t);
            model.coef.push_back(alpha[t] * y[t]);
        }
    }
    model.support_vectors = x.select_rows(sv);
    return model;
}

std::vector<double> decision_values(const SvmModel& model, const Matrix& x_raw) {
    if (x_raw.rows && x_raw.cols != model.features()) {
        throw ValidationError("expected " + std::to_string(model.features()) + " features, got " +
                              std::to_string(x_raw.cols));
    }
    const Matrix x = model.scaler ? model.scaler->apply(x_raw) : x_raw;
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double s = 0.0;
        for (std::size_t k = 0; k < model.support_vectors.rows; ++k) {
            s += model.coef[k] * kernel_value(model, model.support_vectors.row(k), x.row(r));
        }
        out[r] = s - model.rho;
    }
    return out;
}

NaiveBayesModel train_naive_bayes(const Matrix& x, const Labels& y, double variance_floor) {
    check_training_set(x, y);
    NaiveBayesModel m;
    m.variance_floor = variance_floor;
    std::array<std::size_t, 2> count{};
    for (int v : y) ++count[v];
    for (int k = 0; k < 2; ++k) {
        m.prior[k] = static_cast<double>(count[k]) / static_cast<double>(y.size());
        m.mean[k].assign(x.cols, 0.0);
        m.variance[k].assign(x.cols, 0.0);
    }
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) m.mean[y[r]][c] += x(r, c);
    }
    for (int k = 0; k < 2; ++k) {
        for (auto& v : m.mean[k]) v /= static_cast<double>(count[k]);
    }
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) {
            double d = x(r, c) - m.mean[y[r]][c];
            m.variance[y[r]][c] += d * d;
        }
    }
    for (int k = 0; k < 2; ++k) {
        for (auto& v : m.variance[k]) {
            v = count[k] > 1 ? v / static_cast<double>(count[k] - 1) : 0.0;
            v = std::max(v, variance_floor);
        }
    }
    return m;
}

std::vector<std::array<double, 2>> log_posteriors(const NaiveBayesModel& m, const Matrix& x) {
    if (x.rows && x.cols != m.features()) {
        throw ValidationError("expected " + std::to_string(m.features()) + " features, got " + std::to_string(x.cols));
    }
    std::vector<std::array<double, 2>> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (int k = 0; k < 2; ++k) {
            double lp = std::log(m.prior[k]);
            for (std::size_t c = 0; c < x.cols; ++c) {
                double var = m.variance[k][c];
                double d = x(r, c) - m.mean[k][c];
                lp += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
            }
            out[r][k] = lp;
        }
    }
    return out;
}

double accuracy(const Labels& predicted, const Labels& truth) {
    if (predicted.size() != truth.size()) throw ValidationError("prediction and label counts differ");
    if (truth.empty()) return 0.0;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) ok += predicted[i] == truth[i];
    return static_cast<double>(ok) / static_cast<double>(truth.size());
}

std::array<std::array<std::size_t, 2>, 2> confusion(const Labels& predicted, const Labels& truth) {
    std::array<std::array<std::size_t, 2>, 2> m{};
    for (std::size_t i = 0; i < truth.size(); ++i) ++m[truth[i]][predicted[i]];
    return m;
}

Prediction predict(const ClassifierModel& model, const Matrix& x, const Labels* labels) {
    Prediction p;
    std::visit(overloaded{
                   [&](const SvmModel& m) {
                       for (double d : decision_values(m, x)) p.predictions.push_back(d > 0 ? 1 : 0);
                   },
                   [&](const NaiveBayesModel& m) {
                       for (const auto& lp : log_posteriors(m, x)) p.predictions.push_back(lp[1] >= lp[0] ? 1 : 0);
                   },
               },
               model);
    if (labels) p.accuracy = accuracy(p.predictions, *labels);
    return p;
}

}  // namespace procmine::analytics
