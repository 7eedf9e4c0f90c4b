#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "procmine/analytics/common.hpp"

namespace procmine::analytics {

struct MachiningSeries {
    std::string log_id;
    std::size_t ordinal = 0;     // position in the input file list
    std::size_t row_count = 0;   // data rows in the file, parsed or not
    std::map<std::string, std::vector<double>> series;
};

struct SeriesLoad {
    std::vector<MachiningSeries> logs;
    std::vector<std::string> warnings;
};

/// Log id from a CSV path: file stem with a leading "log" removed.
std::string log_id_from_path(const std::filesystem::path& p);

MachiningSeries parse_series(std::string_view csv_text, std::string log_id, std::vector<std::string>* warnings);
SeriesLoad load_series(const std::vector<std::filesystem::path>& files);

/// CSV files of a directory in natural (digit-aware) order.
std::vector<std::filesystem::path> list_csv_files(const std::filesystem::path& dir);

std::vector<MachiningSeries> filter_logs(const std::vector<MachiningSeries>& logs, std::size_t min_points,
                                         bool inclusive = true);

std::vector<std::string> select_parameters(const std::vector<MachiningSeries>& logs, std::size_t min_occurrence);

enum class WindowPosition { first, middle, last };

struct WindowSpec {
    WindowPosition position = WindowPosition::last;
    std::size_t k = 10;
};

WindowPosition parse_window_position(const std::string& s);
std::string to_string(WindowPosition p);

/// 1-based indices the window selects from a series of length n. The middle
/// window starts at round(n/2) - (k+1)/2 + 1 with round-half-even.
std::vector<std::size_t> window_indices(std::size_t n, const WindowSpec& spec);

std::vector<double> window_values(const std::vector<double>& values, const WindowSpec& spec,
                                  const std::string& log_id = {}, const std::string& parameter = {});

struct FeatureMatrix {
    std::vector<std::string> row_ids;
    std::vector<std::string> columns;
    Matrix values;

    FeatureMatrix subset_rows(const std::vector<std::size_t>& idx) const;
    bool operator==(const FeatureMatrix&) const = default;
};

FeatureMatrix build_feature_matrix(const std::vector<MachiningSeries>& logs, const std::vector<std::string>& params,
                                   const WindowSpec& spec);

/// `log,<col>...` CSV, values printed with 17 significant digits.
std::string feature_csv(const FeatureMatrix& m);
FeatureMatrix parse_feature_csv(std::string_view text);

}  // namespace procmine::analytics
