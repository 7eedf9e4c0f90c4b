#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace procmine::cli {

using Json = nlohmann::ordered_json;

struct Context {
    std::ostream& out;
    std::ostream& err;
    unsigned jobs = 1;
    std::vector<std::string> argv;
};

/// Run record written next to the outputs: command, argv, config, seed and
/// SHA-256 digests of every input and output.
class Manifest {
public:
    Manifest(const Context& ctx, std::string command);

    Json config = Json::object();
    void seed(std::uint64_t s) { seed_ = s; }
    void input(const std::filesystem::path& p);
    void output(const std::filesystem::path& p, std::string_view content);
    void warning(const std::string& w) { warnings_.push_back(w); }
    std::string dump() const;

private:
    std::string command_;
    std::vector<std::string> argv_;
    std::optional<std::uint64_t> seed_;
    Json inputs_ = Json::array();
    Json outputs_ = Json::array();
    std::vector<std::string> warnings_;
};

/// Directory for outputs whose path was not given: $PROCMINE_OUT_DIR or ".".
std::filesystem::path default_out_dir();

/// Writes atomically and records the digest in the manifest.
void emit(Manifest& m, const std::filesystem::path& path, std::string_view content);
void write_manifest(const Manifest& m, const std::filesystem::path& path);

void warn(const Context& ctx, Manifest& m, const std::string& w);

/// Files named directly plus the files with `ext` inside named directories
/// (natural order).
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& items, const std::string& ext);

/// Size lists such as "2,7,18", "1..70" or "1..10,20".
std::vector<std::size_t> parse_size_list(const std::string& s);

template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& fn) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace procmine::cli
