#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace procmine::analytics {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
    std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }

    Matrix select_rows(std::span<const std::size_t> idx) const;
    Matrix select_cols(std::span<const std::size_t> idx) const;
    bool operator==(const Matrix&) const = default;
};

/// Binary class labels: 1 = true/ok, 0 = false/nok.
using Labels = std::vector<int>;

Labels select(const Labels& labels, std::span<const std::size_t> idx);

/// Round half to even, as R's round() does.
double round_half_even(double x);

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Generator used by every seeded operation.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n) built from raw generator output, so results do
/// not depend on the standard library's distribution implementation.
std::size_t uniform_index(Rng& rng, std::size_t n);
double uniform01(Rng& rng);
void shuffle(std::vector<std::size_t>& v, Rng& rng);

/// Independent seed for a sub-task, derived from the master seed by a
/// fixed offset (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t offset);

/// Delimited text with RFC 4180 quoting (quotes only needed for fields that
/// contain the delimiter, quotes or newlines).
std::vector<std::vector<std::string>> read_delimited(std::string_view text, char delimiter);
std::string delimited_row(const std::vector<std::string>& fields, char delimiter);

std::string format_number(double v);

/// Digit runs compare by numeric value ("log9" < "log10").
bool natural_less(const std::string& a, const std::string& b);

/// R-style logical: TRUE/True/true/T -> 1, FALSE/False/false/F -> 0,
/// anything else (including "" and NA) -> -1.
int parse_logical(std::string_view s);

}  // namespace procmine::analytics
