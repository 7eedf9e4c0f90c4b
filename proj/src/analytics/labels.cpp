#include "procmine/analytics/labels.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <functional>
#include <numeric>

#include "procmine/error.hpp"
#include "procmine/io.hpp"

namespace procmine::analytics {

namespace {

std::optional<bool> logical(const std::string& s) {
    int v = parse_logical(s);
    if (v < 0) return std::nullopt;
    return v == 1;
}

std::optional<bool> all_of(std::initializer_list<std::optional<bool>> values) {
    bool all = true;
    for (const auto& v : values) {
        if (!v) return std::nullopt;
        all = all && *v;
    }
    return all;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::optional<bool> MeasurementTable::manual_acceptance(std::size_t row) const {
    return all_of({manual[0][row], manual[1][row], manual[2][row]});
}

std::optional<bool> MeasurementTable::automatic_acceptance(std::size_t row) const {
    bool all = true;
    for (std::size_t t = automatic_skip; t < tests.size(); ++t) {
        if (!tests[t][row]) return std::nullopt;
        all = all && *tests[t][row];
    }
    return all;
}

MeasurementTable parse_measurements(std::string_view text) {
    auto rows = read_delimited(text, '*');
    if (rows.empty()) throw ParseError("measurement file is empty", 1);
    const auto& header = rows.front();
    std::array<std::size_t, 3> mm{};
    for (int k = 0; k < 3; ++k) {
        std::string name = "MM" + std::to_string(k + 1);
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ParseError("measurement file has no '" + name + "' column", 1);
        mm[k] = static_cast<std::size_t>(it - header.begin());
    }
    const std::size_t last_mm = *std::max_element(mm.begin(), mm.end());

    MeasurementTable t;
    for (std::size_t c = last_mm + 1; c < header.size(); ++c) t.test_names.push_back(header[c]);
    t.tests.resize(t.test_names.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        auto cell = [&](std::size_t c) { return c < f.size() ? f[c] : std::string(); };
        t.part_ids.push_back(cell(0));
        for (int k = 0; k < 3; ++k) t.manual[k].push_back(logical(cell(mm[k])));
        for (std::size_t c = 0; c < t.test_names.size(); ++c) t.tests[c].push_back(logical(cell(last_mm + 1 + c)));
    }
    return t;
}

MeasurementTable load_measurements(const std::filesystem::path& path) { return parse_measurements(read_file(path)); }

MeasurementTable apply_measurement_shift(const MeasurementTable& table, std::size_t from, std::size_t to,
                                         std::size_t offset) {
    if (offset == 0) return table;
    if (from < 1 || from > to || to > table.size()) {
        throw ValidationError("shift range " + std::to_string(from) + ".." + std::to_string(to) +
                              " is outside the table (" + std::to_string(table.size()) + " rows)");
    }
    if (from <= offset) throw ValidationError("shift offset reaches before the first row");
    if (offset > to - from + 1) throw ValidationError("shift offset is larger than the shifted range");
    MeasurementTable out = table;
    for (auto& col : out.manual) {
        std::vector<std::optional<bool>> saved(col.begin() + static_cast<std::ptrdiff_t>(to - offset),
                                               col.begin() + static_cast<std::ptrdiff_t>(to));
        for (std::size_t i = to; i >= from; --i) col[i - 1] = col[i - 1 - offset];
        for (std::size_t j = 0; j < offset; ++j) col[from - offset - 1 + j] = saved[j];
    }
    return out;
}

ShiftSpec parse_shift(const std::string& s) {
    ShiftSpec spec;
    std::size_t a = s.find(':'), b = s.find(':', a == std::string::npos ? a : a + 1);
    try {
        if (a == std::string::npos || b == std::string::npos) throw std::invalid_argument(s);
        std::size_t used = 0;
        auto num = [&](const std::string& part) {
            auto v = std::stoul(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            return static_cast<std::size_t>(v);
        };
        spec.from = num(s.substr(0, a));
        spec.to = num(s.substr(a + 1, b - a - 1));
        spec.offset = num(s.substr(b + 1));
    } catch (const std::logic_error&) {
        throw ValidationError("bad shift '" + s + "' (expected from:to:offset)");
    }
    return spec;
}

MeasurementStats measurement_stats(const MeasurementTable& table) {
    MeasurementStats st;
    auto count = [&](const std::string& name, auto value_of) {
        PassCount pc{name};
        for (std::size_t r = 0; r < table.size(); ++r) {
            std::optional<bool> v = value_of(r);
            if (!v) ++pc.missing;
            else if (*v) ++pc.pass;
            else ++pc.fail;
        }
        st.counts.push_back(pc);
    };
    for (int k = 0; k < 3; ++k) count("MM" + std::to_string(k + 1), [&](std::size_t r) { return table.manual[k][r]; });
    for (std::size_t t = 0; t < table.test_names.size(); ++t) {
        count(table.test_names[t], [&](std::size_t r) { return table.tests[t][r]; });
    }
    count("acceptance_automatic", [&](std::size_t r) { return table.automatic_acceptance(r); });
    count("acceptance_manual", [&](std::size_t r) { return table.manual_acceptance(r); });
    for (std::size_t r = 0; r < table.size(); ++r) {
        auto a = table.automatic_acceptance(r);
        auto m = table.manual_acceptance(r);
        if (a && m) ++st.confusion[*a ? 1 : 0][*m ? 1 : 0];
    }
    return st;
}

std::string measurement_stats_csv(const MeasurementStats& stats) {
    std::string out = "test,pass,fail,missing\n";
    for (const auto& c : stats.counts) {
        out += delimited_row({c.name, std::to_string(c.pass), std::to_string(c.fail), std::to_string(c.missing)}, ',');
    }
    return out;
}

LabelVector labels_from_spawns(const std::vector<std::string>& log_ids, const std::vector<logs::TraceRecord>& traces,
                               const logs::InstanceTree& tree) {
    std::map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < traces.size(); ++i) by_name.emplace(traces[i].concept_name, i);
    LabelVector out;
    for (const auto& id : log_ids) {
        auto it = by_name.find(id);
        if (it == by_name.end()) {
            out.warnings.push_back("log " + id + ": no trace with that name, excluded");
            continue;
        }
        if (!tree.parent.at(it->second)) out.warnings.push_back("log " + id + ": trace has no parent, labeled false");
        out.ids.push_back(id);
        out.values.push_back(tree.is_last_child(it->second) ? 1 : 0);
    }
    return out;
}

namespace {

// column names as R's read.csv turns them: anything but letters, digits, '.' and '_' becomes '.'
std::string r_name(std::string s) {
    for (auto& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_') c = '.';
    }
    return s;
}

}  // namespace

LabelVector labels_from_measurements(const std::vector<MachiningSeries>& logs, const MeasurementTable& table,
                                     const std::string& selection) {
    std::function<std::optional<bool>(std::size_t)> value_of;
    if (selection == "manual") {
        value_of = [&](std::size_t r) { return table.manual_acceptance(r); };
    } else if (selection == "automatic") {
        value_of = [&](std::size_t r) { return table.automatic_acceptance(r); };
    } else if (selection == "MM1" || selection == "MM2" || selection == "MM3") {
        int k = selection[2] - '1';
        value_of = [&table, k](std::size_t r) { return table.manual[k][r]; };
    } else {
        auto it = std::find(table.test_names.begin(), table.test_names.end(), selection);
        if (it == table.test_names.end()) {
            it = std::find_if(table.test_names.begin(), table.test_names.end(),
                              [&](const std::string& n) { return r_name(n) == r_name(selection); });
        }
        if (it == table.test_names.end()) throw ValidationError("no measurement column named '" + selection + "'");
        auto t = static_cast<std::size_t>(it - table.test_names.begin());
        value_of = [&table, t](std::size_t r) { return table.tests[t][r]; };
    }

    LabelVector out;
    std::size_t missing = 0;
    for (const auto& log : logs) {
        if (log.ordinal >= table.size()) {
            out.warnings.push_back("log " + log.log_id + ": no measurement row, excluded");
            continue;
        }
        auto v = value_of(log.ordinal);
        if (!table.manual[0][log.ordinal] || !v) {
            ++missing;
            continue;
        }
        out.ids.push_back(log.log_id);
        out.values.push_back(*v ? 1 : 0);
    }
    if (missing) out.warnings.push_back(std::to_string(missing) + " log(s) without measurement results excluded");
    return out;
}

std::string labels_csv(const LabelVector& labels) {
    std::string out = "log,label\n";
    for (std::size_t i = 0; i < labels.ids.size(); ++i) out += delimited_row({labels.ids[i], bool_text(labels.values[i])}, ',');
    return out;
}

LabelVector parse_labels_csv(std::string_view text) {
    auto rows = read_delimited(text, ',');
    if (rows.empty()) throw ParseError("label CSV is empty", 1);
    LabelVector out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2) throw ParseError("expected 2 fields", r + 1);
        int v = parse_logical(rows[r][1]);
        if (v < 0 && (rows[r][1] == "1" || rows[r][1] == "0")) v = rows[r][1] == "1";
        if (v < 0) throw ParseError("label '" + rows[r][1] + "' is not a boolean", r + 1);
        out.ids.push_back(rows[r][0]);
        out.values.push_back(v);
    }
    return out;
}

LabeledData join_labels(const FeatureMatrix& features, const LabelVector& labels) {
    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < features.row_ids.size(); ++i) row_of.emplace(features.row_ids[i], i);
    LabeledData out;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.ids.size(); ++i) {
        auto it = row_of.find(labels.ids[i]);
        if (it == row_of.end()) {
            out.warnings.push_back("label for " + labels.ids[i] + " has no feature row, excluded");
            continue;
        }
        idx.push_back(it->second);
        out.labels.push_back(labels.values[i]);
    }
    out.features = features.subset_rows(idx);
    return out;
}

Split split_train_test(std::size_t n, double ratio, std::uint64_t seed) {
    if (n < 2) throw ValidationError("need at least 2 rows to split");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ValidationError("split ratio must be in (0, 1)");
    auto n_train = static_cast<std::size_t>(round_half_even(ratio * static_cast<double>(n)));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    shuffle(idx, rng);
    Split s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

}  // namespace procmine::analytics
