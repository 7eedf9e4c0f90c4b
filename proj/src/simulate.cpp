#include "procmine/simulate.hpp"

#include <cstdio>

#include "procmine/overloaded.hpp"

namespace procmine {

namespace {

// Uniform integer in [0, n) from the raw generator, independent of the
// standard library's distribution implementation.
std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

struct Run {
    std::vector<logs::XesEvent> events;
    bool terminated = false;
};

class Simulator {
public:
    Simulator(const TemplateDocument& doc, std::mt19937_64& rng, const SimulationOptions& opt)
        : doc_(doc), rng_(rng), opt_(opt) {}

    Run sequence(const NodeList& nodes) {
        Run run;
        for (const auto& n : nodes) {
            Run part = node(n);
            append(run, std::move(part));
            if (run.terminated) break;
        }
        return run;
    }

private:
    static void append(Run& into, Run&& part) {
        for (auto& e : part.events) into.events.push_back(std::move(e));
        into.terminated = into.terminated || part.terminated;
    }

    Run node(const Node& n) {
        return std::visit(
            overloaded{
                [&](const Call& c) {
                    Run r;
                    const auto& url = doc_.endpoints.at(c.endpoint);
                    r.events.push_back(logs::make_event(c.label, url, c.id, "start", "activity/calling", ""));
                    r.events.push_back(logs::make_event(c.label, url, c.id, "complete", "activity/done", ""));
                    return r;
                },
                [&](const Manipulate& m) {
                    Run r;
                    r.events.push_back(logs::make_event(m.label, "", m.id, "complete", "activity/done", ""));
                    return r;
                },
                [&](const Terminate&) {
                    Run r;
                    r.terminated = true;
                    return r;
                },
                [&](const Loop& l) {
                    Run r;
                    std::size_t iterations = 1 + pick(rng_, std::max(1u, opt_.max_loop_iterations));
                    for (std::size_t i = 0; i < iterations && !r.terminated; ++i) append(r, sequence(l.children));
                    return r;
                },
                [&](const Choose& ch) { return sequence(ch.branches[pick(rng_, ch.branches.size())].children); },
                [&](const Parallel& p) {
                    std::vector<Run> runs;
                    for (const auto& b : p.branches) runs.push_back(sequence(b.children));
                    return interleave(runs);
                },
            },
            n.kind);
    }

    // Uniform over all interleavings: take the next event from a branch with
    // probability proportional to its remaining length.
    Run interleave(std::vector<Run>& runs) {
        Run out;
        std::vector<std::size_t> next(runs.size(), 0);
        std::size_t remaining = 0;
        for (const auto& r : runs) remaining += r.events.size();
        while (remaining > 0) {
            std::size_t k = pick(rng_, remaining);
            for (std::size_t i = 0; i < runs.size(); ++i) {
                std::size_t left = runs[i].events.size() - next[i];
                if (k < left) {
                    out.events.push_back(std::move(runs[i].events[next[i]++]));
                    break;
                }
                k -= left;
            }
            --remaining;
        }
        for (const auto& r : runs) out.terminated = out.terminated || r.terminated;
        return out;
    }

    const TemplateDocument& doc_;
    std::mt19937_64& rng_;
    const SimulationOptions& opt_;
};

std::string timestamp_at(std::size_t second) {
    char buf[64];
    std::size_t h = second / 3600, m = (second / 60) % 60, s = second % 60;
    std::snprintf(buf, sizeof buf, "2020-01-01T%02zu:%02zu:%02zu.000+01:00", h % 24, m, s);
    return buf;
}

}  // namespace

logs::XesTrace simulate_trace(const TemplateDocument& doc, std::mt19937_64& rng, const SimulationOptions& options) {
    Run run = Simulator(doc, rng, options).sequence(doc.tree.root);
    logs::XesTrace trace;
    trace.events = std::move(run.events);
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        for (auto& a : trace.events[i].attributes) {
            if (a.key == "time:timestamp") a.value = timestamp_at(i);
        }
    }
    return trace;
}

}  // namespace procmine
