#include "procmine/analytics/common.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "procmine/error.hpp"

namespace procmine::analytics {

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
    Matrix out(idx.size(), cols);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        auto src = row(idx[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
    Matrix out(rows, idx.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = (*this)(r, idx[c]);
    }
    return out;
}

Labels select(const Labels& labels, std::span<const std::size_t> idx) {
    Labels out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(labels[i]);
    return out;
}

double round_half_even(double x) {
    double r = std::round(x);
    if (std::abs(x - std::trunc(x)) == 0.5) r = 2.0 * std::round(x / 2.0);
    return r;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t offset) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (offset + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<std::vector<std::string>> read_delimited(std::string_view text, char delimiter) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            any = true;
        } else if (c == delimiter) {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
            ++line;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line);
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string delimited_row(const std::vector<std::string>& fields, char delimiter) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += delimiter;
        const auto& f = fields[i];
        if (f.find(delimiter) != std::string::npos || f.find_first_of("\"\r\n") != std::string::npos) {
            out += '"';
            for (char c : f) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        } else {
            out += f;
        }
    }
    out += '\n';
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            std::string_view da(a.data() + i, ie - i), db(b.data() + j, je - j);
            while (da.size() > 1 && da.front() == '0') da.remove_prefix(1);
            while (db.size() > 1 && db.front() == '0') db.remove_prefix(1);
            if (da.size() != db.size()) return da.size() < db.size();
            if (da != db) return da < db;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if ((a.size() - i) != (b.size() - j)) return a.size() - i < b.size() - j;
    return a < b;
}

int parse_logical(std::string_view s) {
    if (s == "TRUE" || s == "True" || s == "true" || s == "T") return 1;
    if (s == "FALSE" || s == "False" || s == "false" || s == "F") return 0;
    return -1;
}

}  // namespace procmine::analytics
