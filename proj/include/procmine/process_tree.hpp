#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace procmine {

struct Node;
using NodeList = std::vector<Node>;

struct Call {
    std::string id;
    std::string label;
    std::string endpoint;  // endpoint name, resolved through EndpointMap
    bool operator==(const Call&) const = default;
};

struct Manipulate {
    std::string id;
    std::string label;
    bool operator==(const Manipulate&) const = default;
};

struct Terminate {
    bool operator==(const Terminate&) const = default;
};

/// Do-while: the body runs at least once.
struct Loop {
    NodeList children;
    bool operator==(const Loop&) const;
};

enum class BranchKind { alternative, otherwise };

struct Branch {
    BranchKind kind = BranchKind::alternative;
    NodeList children;
    bool operator==(const Branch&) const;
};

struct Choose {
    std::vector<Branch> branches;
    bool operator==(const Choose&) const = default;
};

struct ParallelBranch {
    NodeList children;
    bool operator==(const ParallelBranch&) const;
};

struct Parallel {
    std::vector<ParallelBranch> branches;
    bool operator==(const Parallel&) const = default;
};

struct Node {
    std::variant<Call, Manipulate, Terminate, Loop, Choose, Parallel> kind;
    bool operator==(const Node&) const = default;
};

inline bool Loop::operator==(const Loop& o) const { return children == o.children; }
inline bool Branch::operator==(const Branch& o) const { return kind == o.kind && children == o.children; }
inline bool ParallelBranch::operator==(const ParallelBranch& o) const { return children == o.children; }

/// Top-level sequence of a template description.
struct ProcessTree {
    NodeList root;
    bool operator==(const ProcessTree&) const = default;
};

/// Endpoint name -> URL.
using EndpointMap = std::map<std::string, std::string>;

struct TreeCounts {
    std::size_t calls = 0;
    std::size_t manipulates = 0;
    std::size_t terminates = 0;
    std::size_t loops = 0;
    std::size_t chooses = 0;
    std::size_t choose_branches = 0;
    std::size_t parallels = 0;
    std::size_t parallel_branches = 0;
};

TreeCounts count_nodes(const ProcessTree& tree);

/// Checks the structural invariants: unique Call/Manipulate ids, at most
/// one `otherwise` per Choose, non-empty Loop/Choose/Parallel, Terminate
/// only as the last element of a sequence and never inside a Parallel.
/// Throws ValidationError.
void validate(const ProcessTree& tree);

}  // namespace procmine
