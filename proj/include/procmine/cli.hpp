#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procmine/analytics/features.hpp"
#include "procmine/analytics/labels.hpp"

namespace procmine::cli {

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 on bad input or usage, 2 on internal errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Settings of one of the two reference experiments. Every field can be
/// overridden on the command line.
struct ScenarioPreset {
    std::string name;
    std::size_t min_points = 100;
    bool inclusive = true;
    std::vector<analytics::WindowPosition> windows;
    std::size_t window_k = 10;
    std::size_t min_occurrence = 10;
    std::optional<analytics::ShiftSpec> shift;
    std::vector<std::size_t> cluster_ks;        // empty: no clustering
    std::size_t scree_max = 0;                  // 0: no scree curve
    std::vector<std::string> label_selections;  // scenario 2 measurement labels
    bool rfe = false;
};

ScenarioPreset scenario_preset(const std::string& name);

std::string sha256_hex(std::string_view data);

}  // namespace procmine::cli
