#include "procmine/xml.hpp"

#include <expat.h>

#include "procmine/error.hpp"

namespace procmine::xml {

namespace {

constexpr char kNamespaceSeparator = '\x1f';

std::pair<std::string, std::string> split_qualified(const char* raw) {
    std::string_view s(raw);
    auto pos = s.find(kNamespaceSeparator);
    if (pos == std::string_view::npos) return {"", std::string(s)};
    return {std::string(s.substr(0, pos)), std::string(s.substr(pos + 1))};
}

struct BuildState {
    XML_Parser parser = nullptr;
    std::unique_ptr<Element> root;
    std::vector<Element*> stack;
};

void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* st = static_cast<BuildState*>(user);
    auto el = std::make_unique<Element>();
    auto [ns, local] = split_qualified(name);
    el->ns = std::move(ns);
    el->name = std::move(local);
    el->line = XML_GetCurrentLineNumber(st->parser);
    for (int i = 0; attrs[i]; i += 2) {
        el->attributes.emplace_back(split_qualified(attrs[i]).second, attrs[i + 1]);
    }
    Element* raw = el.get();
    if (st->stack.empty()) {
        st->root = std::move(el);
    } else {
        st->stack.back()->children.push_back(std::move(el));
    }
    st->stack.push_back(raw);
}

void on_end(void* user, const XML_Char*) {
    static_cast<BuildState*>(user)->stack.pop_back();
}

void on_text(void* user, const XML_Char* s, int len) {
    auto* st = static_cast<BuildState*>(user);
    if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

const std::string* Element::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return &v;
    }
    return nullptr;
}

const Element* Element::child(std::string_view local_name) const {
    for (const auto& c : children) {
        if (c->name == local_name) return c.get();
    }
    return nullptr;
}

std::unique_ptr<Element> parse(std::string_view document) {
    BuildState st;
    st.parser = XML_ParserCreateNS("UTF-8", kNamespaceSeparator);
    if (!st.parser) throw Error("xml: cannot allocate parser");
    XML_SetUserData(st.parser, &st);
    XML_SetElementHandler(st.parser, on_start, on_end);
    XML_SetCharacterDataHandler(st.parser, on_text);
    auto status = XML_Parse(st.parser, document.data(), static_cast<int>(document.size()), XML_TRUE);
    if (status != XML_STATUS_OK) {
        std::string msg = std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(st.parser));
        std::size_t line = XML_GetCurrentLineNumber(st.parser);
        XML_ParserFree(st.parser);
        throw ParseError(msg, line);
    }
    XML_ParserFree(st.parser);
    if (!st.root) throw ParseError("empty XML document");
    return std::move(st.root);
}

std::string escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace procmine::xml
