#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "procmine/process_tree.hpp"

namespace procmine {

struct TemplateDocument {
    ProcessTree tree;
    EndpointMap endpoints;
    std::string source_path;
};

/// Parses a CPEE testset document. The process description is read from
/// /testset/description/description and the endpoints from
/// /testset/endpoints (element local name -> URL text).
///
/// Throws ParseError for malformed XML or a missing description, and
/// ValidationError for unknown element kinds, calls to undeclared
/// endpoints or violated tree invariants.
TemplateDocument parse_template(std::string_view xml);

TemplateDocument load_template(const std::filesystem::path& path);

/// Removes every space and '?' from a task label.
std::string clean_label(std::string_view label);

/// Canonical testset XML for a document; parse_template() of the result
/// yields an equal tree and endpoint map.
std::string write_template(const TemplateDocument& doc);

}  // namespace procmine
