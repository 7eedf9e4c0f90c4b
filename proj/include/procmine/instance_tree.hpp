#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procmine/yaml_log.hpp"

namespace procmine::logs {

struct LinkOptions {
    /// When set, only event scalars whose dotted path ends with this key
    /// are read as child references, and values that match no trace are
    /// reported as dangling. When empty, every scalar of every event is
    /// compared against the other traces' concept:name and uuid, except
    /// in machining `Fetch` receiving events.
    std::optional<std::string> spawn_field;
};

/// Parent/child forest over trace indices of the input list.
struct InstanceTree {
    std::vector<std::optional<std::size_t>> parent;
    std::vector<std::vector<std::size_t>> children;  // spawn order
    std::vector<std::size_t> roots;                  // input order
    std::vector<std::string> warnings;

    bool is_last_child(std::size_t trace) const;
};

/// Links each trace to the subprocess instances it spawned. The first link
/// to a child wins; later ones and links that would close a cycle are
/// dropped with a warning.
InstanceTree link_subprocesses(const std::vector<TraceRecord>& traces, const LinkOptions& options = {});

}  // namespace procmine::logs
