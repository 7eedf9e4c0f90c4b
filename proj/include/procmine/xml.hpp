#pragma once

// Small element tree on top of expat. Only what the template and XES
// readers need: elements, attributes, concatenated character data.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace procmine::xml {

struct Element {
    std::string ns;     // namespace URI, empty when unqualified
    std::string name;   // local name
    std::vector<std::pair<std::string, std::string>> attributes;  // local names
    std::string text;   // character data directly inside this element
    std::vector<std::unique_ptr<Element>> children;
    std::size_t line = 0;

    const std::string* attribute(std::string_view key) const;
    const Element* child(std::string_view local_name) const;
};

/// Parses a complete document. Throws ParseError on malformed input.
std::unique_ptr<Element> parse(std::string_view document);

/// Escapes &, <, >, " and ' for use in attribute values and text.
std::string escape(std::string_view raw);

}  // namespace procmine::xml
