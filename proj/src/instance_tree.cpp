#include "procmine/instance_tree.hpp"

#include <map>

namespace procmine::logs {

namespace {

bool path_ends_with_key(const std::string& path, const std::string& key) {
    if (path == key) return true;
    return path.size() > key.size() && path.compare(path.size() - key.size(), key.size(), key) == 0 &&
           path[path.size() - key.size() - 1] == '.';
}

}  // namespace

bool InstanceTree::is_last_child(std::size_t trace) const {
    const auto& p = parent.at(trace);
    if (!p) return false;
    const auto& siblings = children[*p];
    return !siblings.empty() && siblings.back() == trace;
}

InstanceTree link_subprocesses(const std::vector<TraceRecord>& traces, const LinkOptions& options) {
    InstanceTree tree;
    tree.parent.assign(traces.size(), std::nullopt);
    tree.children.assign(traces.size(), {});

    std::map<std::string, std::size_t> by_ref;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        by_ref.emplace(traces[i].concept_name, i);
        if (!traces[i].uuid.empty()) by_ref.emplace(traces[i].uuid, i);
    }

    auto ancestor_of = [&](std::size_t candidate, std::size_t node) {
        for (auto cur = std::optional<std::size_t>(node); cur; cur = tree.parent[*cur]) {
            if (*cur == candidate) return true;
        }
        return false;
    };

    for (std::size_t p = 0; p < traces.size(); ++p) {
        for (const auto& ev : traces[p].events) {
            // machining payloads are numbers that may collide with instance names
            if (!options.spawn_field && ev.concept_name == "Fetch" && ev.cpee_lifecycle == "activity/receiving") continue;
            for (const auto& [path, value] : ev.scalars) {
                if (options.spawn_field && !path_ends_with_key(path, *options.spawn_field)) continue;
                auto it = by_ref.find(value);
                if (it == by_ref.end()) {
                    if (options.spawn_field) {
                        tree.warnings.push_back("trace '" + traces[p].concept_name + "' references unknown instance '" +
                                                value + "'");
                    }
                    continue;
                }
                std::size_t c = it->second;
                if (c == p) continue;
                if (tree.parent[c]) {
                    if (*tree.parent[c] != p) {
                        tree.warnings.push_back("trace '" + traces[c].concept_name + "' referenced by '" +
                                                traces[p].concept_name + "' already has a parent; first link kept");
                    }
                    continue;
                }
                if (ancestor_of(c, p)) {
                    tree.warnings.push_back("link '" + traces[p].concept_name + "' -> '" + traces[c].concept_name +
                                            "' would form a cycle; dropped");
                    continue;
                }
                tree.parent[c] = p;
                tree.children[p].push_back(c);
            }
        }
    }
    for (std::size_t i = 0; i < traces.size(); ++i) {
        if (!tree.parent[i]) tree.roots.push_back(i);
    }
    return tree;
}

}  // namespace procmine::logs
