#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "procmine/analytics/common.hpp"
#include "procmine/analytics/features.hpp"
#include "procmine/instance_tree.hpp"
#include "procmine/yaml_log.hpp"

namespace procmine::analytics {

/// Per-part quality results. Missing or unparsable cells are nullopt.
struct MeasurementTable {
    std::vector<std::string> part_ids;
    std::array<std::vector<std::optional<bool>>, 3> manual;  // MM1..MM3
    std::vector<std::string> test_names;                     // automatic tests, file order
    std::vector<std::vector<std::optional<bool>>> tests;     // [test][row]
    std::size_t automatic_skip = 3;                          // leading tests left out of automatic acceptance

    std::size_t size() const { return part_ids.size(); }
    /// All three manual measurements pass.
    std::optional<bool> manual_acceptance(std::size_t row) const;
    /// All automatic tests after the first `automatic_skip` pass.
    std::optional<bool> automatic_acceptance(std::size_t row) const;
    bool operator==(const MeasurementTable&) const = default;
};

/// Star-delimited measuring file. The first column is the part id; MM1..MM3
/// are found by name and every column after MM3 is an automatic test.
MeasurementTable parse_measurements(std::string_view text);
MeasurementTable load_measurements(const std::filesystem::path& path);

/// Moves MM1..MM3 of rows [from, to] (1-based) down by `offset`: row r takes
/// the values of row r - offset, and the values displaced from the end of the
/// range land on rows from - offset .. from - 1.
MeasurementTable apply_measurement_shift(const MeasurementTable& table, std::size_t from, std::size_t to,
                                         std::size_t offset);

struct ShiftSpec {
    std::size_t from = 0, to = 0, offset = 0;
};
ShiftSpec parse_shift(const std::string& s);  // "from:to:offset"

struct PassCount {
    std::string name;
    std::size_t pass = 0, fail = 0, missing = 0;
};

struct MeasurementStats {
    std::vector<PassCount> counts;  // MM1..MM3, tests, then the two acceptances
    // confusion[auto][manual], index 1 = true; rows with either side missing are left out
    std::array<std::array<std::size_t, 2>, 2> confusion{};
};

MeasurementStats measurement_stats(const MeasurementTable& table);
std::string measurement_stats_csv(const MeasurementStats& stats);

struct LabelVector {
    std::vector<std::string> ids;
    Labels values;
    std::vector<std::string> warnings;
};

/// Label `true` iff the trace named by the log id is the last child spawned
/// by its parent.
LabelVector labels_from_spawns(const std::vector<std::string>& log_ids,
                               const std::vector<logs::TraceRecord>& traces, const logs::InstanceTree& tree);

/// What a measurement label means: "manual", "automatic", or the name of a
/// single column (MM1..MM3 or a test). Test names also match in their dotted
/// form, e.g. "Kreis.19.2.1.Konzentrizitaet".
LabelVector labels_from_measurements(const std::vector<MachiningSeries>& logs, const MeasurementTable& table,
                                     const std::string& selection);

std::string labels_csv(const LabelVector& labels);
LabelVector parse_labels_csv(std::string_view text);

/// Keeps the rows of `features` that have a label, in label order.
struct LabeledData {
    FeatureMatrix features;
    Labels labels;
    std::vector<std::string> warnings;
};
LabeledData join_labels(const FeatureMatrix& features, const LabelVector& labels);

struct Split {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
};

/// round(ratio * n) rows sampled without replacement for training.
Split split_train_test(std::size_t n, double ratio, std::uint64_t seed);

}  // namespace procmine::analytics
