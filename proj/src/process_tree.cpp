#include "procmine/process_tree.hpp"

#include <set>

#include "procmine/error.hpp"
#include "procmine/overloaded.hpp"

namespace procmine {

namespace {

void count_list(const NodeList& list, TreeCounts& c);

void count_node(const Node& n, TreeCounts& c) {
    std::visit(overloaded{
                   [&](const Call&) { ++c.calls; },
                   [&](const Manipulate&) { ++c.manipulates; },
                   [&](const Terminate&) { ++c.terminates; },
                   [&](const Loop& l) {
                       ++c.loops;
                       count_list(l.children, c);
                   },
                   [&](const Choose& ch) {
                       ++c.chooses;
                       c.choose_branches += ch.branches.size();
                       for (const auto& b : ch.branches) count_list(b.children, c);
                   },
                   [&](const Parallel& p) {
                       ++c.parallels;
                       c.parallel_branches += p.branches.size();
                       for (const auto& b : p.branches) count_list(b.children, c);
                   },
               },
               n.kind);
}

void count_list(const NodeList& list, TreeCounts& c) {
    for (const auto& n : list) count_node(n, c);
}

struct Validator {
    std::set<std::string> ids;

    void claim(const std::string& id) {
        if (id.empty()) throw ValidationError("task without id");
        if (!ids.insert(id).second) throw ValidationError("duplicate task id '" + id + "'");
    }

    void list(const NodeList& nodes, bool in_parallel) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Node& n = nodes[i];
            if (std::holds_alternative<Terminate>(n.kind)) {
                if (in_parallel) throw ValidationError("terminate inside a parallel branch is not supported");
                if (i + 1 != nodes.size()) throw ValidationError("elements after terminate are unreachable");
            }
            node(n, in_parallel);
        }
    }

    void node(const Node& n, bool in_parallel) {
        std::visit(overloaded{
                       [&](const Call& c) { claim(c.id); },
                       [&](const Manipulate& m) { claim(m.id); },
                       [&](const Terminate&) {},
                       [&](const Loop& l) {
                           if (l.children.empty()) throw ValidationError("loop without children");
                           list(l.children, in_parallel);
                       },
                       [&](const Choose& ch) {
                           if (ch.branches.empty()) throw ValidationError("choose without branches");
                           std::size_t otherwise = 0;
                           for (const auto& b : ch.branches) {
                               if (b.kind == BranchKind::otherwise) ++otherwise;
                               list(b.children, in_parallel);
                           }
                           if (otherwise > 1) throw ValidationError("choose with more than one otherwise");
                       },
                       [&](const Parallel& p) {
                           if (p.branches.empty()) throw ValidationError("parallel without branches");
                           for (const auto& b : p.branches) list(b.children, true);
                       },
                   },
                   n.kind);
    }
};

}  // namespace

TreeCounts count_nodes(const ProcessTree& tree) {
    TreeCounts c;
    count_list(tree.root, c);
    return c;
}

void validate(const ProcessTree& tree) {
    Validator v;
    v.list(tree.root, false);
}

}  // namespace procmine
