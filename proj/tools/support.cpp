#include "support.hpp"

#include <openssl/evp.h>

#include <cstdlib>

#include "procmine/analytics/common.hpp"
#include "procmine/cli.hpp"
#include "procmine/error.hpp"
#include "procmine/io.hpp"

namespace procmine::cli {

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

Manifest::Manifest(const Context& ctx, std::string command) : command_(std::move(command)), argv_(ctx.argv) {}

void Manifest::input(const std::filesystem::path& p) {
    if (std::filesystem::is_directory(p)) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::recursive_directory_iterator(p)) {
            if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
            return analytics::natural_less(a.generic_string(), b.generic_string());
        });
        for (const auto& f : files) input(f);
        return;
    }
    inputs_.push_back({{"path", p.generic_string()}, {"sha256", sha256_hex(read_file(p))}});
}

void Manifest::output(const std::filesystem::path& p, std::string_view content) {
    outputs_.push_back({{"path", p.generic_string()}, {"sha256", sha256_hex(content)}});
}

std::string Manifest::dump() const {
    Json j;
    j["tool"] = "procmine";
    j["command"] = command_;
    j["argv"] = argv_;
    j["config"] = config;
    j["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["warnings"] = warnings_;
    return j.dump(2) + "\n";
}

std::filesystem::path default_out_dir() {
    const char* env = std::getenv("PROCMINE_OUT_DIR");
    return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

void emit(Manifest& m, const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path, content);
    m.output(path, content);
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path, m.dump());
}

void warn(const Context& ctx, Manifest& m, const std::string& w) {
    ctx.err << "warning: " << w << '\n';
    m.warning(w);
}

std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& items, const std::string& ext) {
    std::vector<std::filesystem::path> out;
    for (const auto& item : items) {
        std::filesystem::path p(item);
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> files;
            for (const auto& e : std::filesystem::directory_iterator(p)) {
                if (e.is_regular_file() && e.path().extension() == ext) files.push_back(e.path());
            }
            std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
                return analytics::natural_less(a.filename().string(), b.filename().string());
            });
            out.insert(out.end(), files.begin(), files.end());
        } else if (std::filesystem::is_regular_file(p)) {
            out.push_back(p);
        } else {
            throw Error("input not found: " + item);
        }
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
    std::vector<std::size_t> out;
    auto number = [&](const std::string& t) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(t, &used);
        } catch (const std::logic_error&) {
            used = std::string::npos;
        }
        if (used != t.size() || t.empty()) throw ValidationError("bad number '" + t + "' in list '" + s + "'");
        return static_cast<std::size_t>(v);
    };
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        std::string part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (auto dots = part.find(".."); dots != std::string::npos) {
            std::size_t a = number(part.substr(0, dots)), b = number(part.substr(dots + 2));
            if (a > b) throw ValidationError("empty range '" + part + "'");
            for (std::size_t v = a; v <= b; ++v) out.push_back(v);
        } else {
            out.push_back(number(part));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace procmine::cli
