#include "procmine/analytics/features.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>

#include "procmine/error.hpp"
#include "procmine/io.hpp"

namespace procmine::analytics {

namespace {

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("machining CSV has no '" + name + "' column", 1);
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::string log_id_from_path(const std::filesystem::path& p) {
    std::string stem = p.stem().string();
    if (stem.rfind("log", 0) == 0 && stem.size() > 3) stem = stem.substr(3);
    return stem;
}

MachiningSeries parse_series(std::string_view csv_text, std::string log_id, std::vector<std::string>* warnings) {
    MachiningSeries out;
    out.log_id = std::move(log_id);
    auto rows = read_delimited(csv_text, '*');
    if (rows.empty()) return out;
    const auto& header = rows.front();
    const std::size_t id_col = column_of(header, "Id");
    const std::size_t value_col = column_of(header, "value");
    const std::size_t ts_col = column_of(header, "timestamp");
    const std::size_t sts_col = column_of(header, "ServerTimestamp");
    const std::size_t width = std::max({id_col, value_col, ts_col, sts_col}) + 1;

    struct Row {
        std::string id, server_ts, ts;
        double value;
    };
    std::vector<Row> parsed;
    std::size_t skipped = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        ++out.row_count;
        const auto& f = rows[r];
        if (f.size() < width) {
            ++skipped;
            continue;
        }
        auto v = parse_double(f[value_col]);
        if (!v || f[id_col].empty()) {
            ++skipped;
            continue;
        }
        parsed.push_back({f[id_col], f[sts_col], f[ts_col], *v});
    }
    if (skipped && warnings) {
        warnings->push_back("log " + out.log_id + ": " + std::to_string(skipped) +
                            " row(s) without a numeric value skipped");
    }
    std::stable_sort(parsed.begin(), parsed.end(), [](const Row& a, const Row& b) {
        return std::tie(a.id, a.server_ts, a.ts) < std::tie(b.id, b.server_ts, b.ts);
    });
    for (auto& r : parsed) out.series[r.id].push_back(r.value);
    return out;
}

SeriesLoad load_series(const std::vector<std::filesystem::path>& files) {
    SeriesLoad load;
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto s = parse_series(read_file(files[i]), log_id_from_path(files[i]), &load.warnings);
        s.ordinal = i;
        load.logs.push_back(std::move(s));
    }
    return load;
}

std::vector<std::filesystem::path> list_csv_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return natural_less(a.filename().string(), b.filename().string());
    });
    return files;
}

std::vector<MachiningSeries> filter_logs(const std::vector<MachiningSeries>& logs, std::size_t min_points,
                                         bool inclusive) {
    if (min_points < 1) throw ValidationError("min_points must be at least 1");
    std::vector<MachiningSeries> out;
    for (const auto& l : logs) {
        if (inclusive ? l.row_count >= min_points : l.row_count > min_points) out.push_back(l);
    }
    return out;
}

std::vector<std::string> select_parameters(const std::vector<MachiningSeries>& logs, std::size_t min_occurrence) {
    if (logs.empty()) throw ValidationError("no logs to select parameters from");
    std::vector<std::string> out;
    for (const auto& [param, values] : logs.front().series) {
        bool keep = true;
        for (const auto& l : logs) {
            auto it = l.series.find(param);
            if (it == l.series.end() || it->second.size() < min_occurrence) {
                keep = false;
                break;
            }
        }
        if (keep) out.push_back(param);
    }
    if (out.empty()) {
        throw ValidationError("no parameter occurs at least " + std::to_string(min_occurrence) +
                              " times in every log; lower the occurrence threshold");
    }
    return out;
}

WindowPosition parse_window_position(const std::string& s) {
    if (s == "first") return WindowPosition::first;
    if (s == "middle") return WindowPosition::middle;
    if (s == "last") return WindowPosition::last;
    throw ValidationError("unknown window position '" + s + "' (expected first, middle or last)");
}

std::string to_string(WindowPosition p) {
    switch (p) {
        case WindowPosition::first: return "first";
        case WindowPosition::middle: return "middle";
        case WindowPosition::last: return "last";
    }
    return {};
}

std::vector<std::size_t> window_indices(std::size_t n, const WindowSpec& spec) {
    if (spec.k == 0) throw ValidationError("window size must be positive");
    long long start = 1;
    switch (spec.position) {
        case WindowPosition::first: start = 1; break;
        case WindowPosition::last: start = static_cast<long long>(n) - static_cast<long long>(spec.k) + 1; break;
        case WindowPosition::middle:
            start = static_cast<long long>(round_half_even(static_cast<double>(n) / 2.0)) -
                    static_cast<long long>((spec.k + 1) / 2) + 1;
            break;
    }
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < spec.k; ++j) idx.push_back(static_cast<std::size_t>(start + static_cast<long long>(j)));
    if (start < 1 || start + static_cast<long long>(spec.k) - 1 > static_cast<long long>(n)) idx.clear();
    return idx;
}

std::vector<double> window_values(const std::vector<double>& values, const WindowSpec& spec, const std::string& log_id,
                                  const std::string& parameter) {
    auto idx = window_indices(values.size(), spec);
    if (idx.empty()) {
        throw ValidationError("log " + log_id + ", parameter " + parameter + ": " + to_string(spec.position) +
                              " window of " + std::to_string(spec.k) + " needs more than " +
                              std::to_string(values.size()) + " values");
    }
    std::vector<double> out;
    for (auto i : idx) out.push_back(values[i - 1]);
    return out;
}

FeatureMatrix FeatureMatrix::subset_rows(const std::vector<std::size_t>& idx) const {
    FeatureMatrix out;
    out.columns = columns;
    for (auto i : idx) out.row_ids.push_back(row_ids[i]);
    out.values = values.select_rows(idx);
    return out;
}

FeatureMatrix build_feature_matrix(const std::vector<MachiningSeries>& logs, const std::vector<std::string>& params,
                                   const WindowSpec& spec) {
    FeatureMatrix m;
    for (const auto& p : params) {
        for (std::size_t j = 1; j <= spec.k; ++j) m.columns.push_back(p + std::to_string(j));
    }
    m.values = Matrix(logs.size(), m.columns.size());
    for (std::size_t r = 0; r < logs.size(); ++r) {
        m.row_ids.push_back(logs[r].log_id);
        for (std::size_t c = 0; c < params.size(); ++c) {
            auto it = logs[r].series.find(params[c]);
            static const std::vector<double> none;
            auto w = window_values(it == logs[r].series.end() ? none : it->second, spec, logs[r].log_id, params[c]);
            std::copy(w.begin(), w.end(), m.values.row(r).begin() + static_cast<std::ptrdiff_t>(c * spec.k));
        }
    }
    return m;
}

std::string feature_csv(const FeatureMatrix& m) {
    std::vector<std::string> header{"log"};
    header.insert(header.end(), m.columns.begin(), m.columns.end());
    std::string out = delimited_row(header, ',');
    for (std::size_t r = 0; r < m.values.rows; ++r) {
        std::vector<std::string> row{m.row_ids[r]};
        for (double v : m.values.row(r)) row.push_back(format_number(v));
        out += delimited_row(row, ',');
    }
    return out;
}

FeatureMatrix parse_feature_csv(std::string_view text) {
    auto rows = read_delimited(text, ',');
    if (rows.empty() || rows.front().empty()) throw ParseError("feature CSV is empty", 1);
    FeatureMatrix m;
    m.columns.assign(rows.front().begin() + 1, rows.front().end());
    m.values = Matrix(rows.size() - 1, m.columns.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != m.columns.size() + 1) {
            throw ParseError("expected " + std::to_string(m.columns.size() + 1) + " fields", r + 1);
        }
        m.row_ids.push_back(rows[r][0]);
        for (std::size_t c = 0; c < m.columns.size(); ++c) {
            auto v = parse_double(rows[r][c + 1]);
            if (!v) throw ParseError("non-numeric feature value '" + rows[r][c + 1] + "'", r + 1);
            m.values(r - 1, c) = *v;
        }
    }
    return m;
}

}  // namespace procmine::analytics
