#include "procmine/template_parser.hpp"

#include <fstream>
#include <sstream>

#include "procmine/error.hpp"
#include "procmine/overloaded.hpp"
#include "procmine/xml.hpp"

namespace procmine {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

const xml::Element* find_descendant(const xml::Element& el, std::string_view name) {
    for (const auto& c : el.children) {
        if (c->name == name) return c.get();
        if (const auto* d = find_descendant(*c, name)) return d;
    }
    return nullptr;
}

std::string required_id(const xml::Element& el) {
    const auto* id = el.attribute("id");
    if (!id || id->empty()) {
        throw ValidationError("line " + std::to_string(el.line) + ": <" + el.name + "> without id attribute");
    }
    return *id;
}

class TreeBuilder {
public:
    explicit TreeBuilder(const EndpointMap& endpoints) : endpoints_(endpoints) {}

    NodeList sequence(const xml::Element& parent) {
        NodeList out;
        for (const auto& c : parent.children) out.push_back(node(*c));
        return out;
    }

private:
    Node node(const xml::Element& el) {
        const std::string& kind = el.name;
        if (kind == "call") {
            Call c;
            c.id = required_id(el);
            const auto* ep = el.attribute("endpoint");
            if (!ep) throw ValidationError("call '" + c.id + "' has no endpoint attribute");
            if (!endpoints_.count(*ep)) {
                throw ValidationError("call '" + c.id + "' references undeclared endpoint '" + *ep + "'");
            }
            c.endpoint = *ep;
            const auto* label = find_descendant(el, "label");
            if (!label) throw ValidationError("call '" + c.id + "' has no label");
            c.label = label->text;
            return Node{std::move(c)};
        }
        if (kind == "manipulate") {
            Manipulate m;
            m.id = required_id(el);
            if (const auto* label = el.attribute("label")) m.label = *label;
            return Node{std::move(m)};
        }
        if (kind == "terminate") return Node{Terminate{}};
        if (kind == "loop") return Node{Loop{sequence(el)}};
        if (kind == "choose") {
            Choose ch;
            for (const auto& c : el.children) {
                Branch b;
                if (c->name == "alternative") {
                    b.kind = BranchKind::alternative;
                } else if (c->name == "otherwise") {
                    b.kind = BranchKind::otherwise;
                } else {
                    throw ValidationError("line " + std::to_string(c->line) + ": <" + c->name +
                                          "> is not allowed inside <choose>");
                }
                b.children = sequence(*c);
                ch.branches.push_back(std::move(b));
            }
            return Node{std::move(ch)};
        }
        if (kind == "parallel") {
            Parallel p;
            for (const auto& c : el.children) {
                if (c->name != "parallel_branch") {
                    throw ValidationError("line " + std::to_string(c->line) + ": <" + c->name +
                                          "> is not allowed inside <parallel>");
                }
                p.branches.push_back(ParallelBranch{sequence(*c)});
            }
            return Node{std::move(p)};
        }
        throw ValidationError("line " + std::to_string(el.line) + ": unknown element <" + kind + ">");
    }

    const EndpointMap& endpoints_;
};

void write_list(std::ostringstream& out, const NodeList& list, int depth);

void write_node(std::ostringstream& out, const Node& n, int depth) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    std::visit(overloaded{
                   [&](const Call& c) {
                       out << pad << "<call id=\"" << xml::escape(c.id) << "\" endpoint=\"" << xml::escape(c.endpoint)
                           << "\">\n"
                           << pad << "  <parameters>\n"
                           << pad << "    <label>" << xml::escape(c.label) << "</label>\n"
                           << pad << "  </parameters>\n"
                           << pad << "</call>\n";
                   },
                   [&](const Manipulate& m) {
                       out << pad << "<manipulate id=\"" << xml::escape(m.id) << "\" label=\"" << xml::escape(m.label)
                           << "\"/>\n";
                   },
                   [&](const Terminate&) { out << pad << "<terminate/>\n"; },
                   [&](const Loop& l) {
                       out << pad << "<loop>\n";
                       write_list(out, l.children, depth + 1);
                       out << pad << "</loop>\n";
                   },
                   [&](const Choose& ch) {
                       out << pad << "<choose>\n";
                       for (const auto& b : ch.branches) {
                           const char* tag = b.kind == BranchKind::otherwise ? "otherwise" : "alternative";
                           out << pad << "  <" << tag << ">\n";
                           write_list(out, b.children, depth + 2);
                           out << pad << "  </" << tag << ">\n";
                       }
                       out << pad << "</choose>\n";
                   },
                   [&](const Parallel& p) {
                       out << pad << "<parallel>\n";
                       for (const auto& b : p.branches) {
                           out << pad << "  <parallel_branch>\n";
                           write_list(out, b.children, depth + 2);
                           out << pad << "  </parallel_branch>\n";
                       }
                       out << pad << "</parallel>\n";
                   },
               },
               n.kind);
}

void write_list(std::ostringstream& out, const NodeList& list, int depth) {
    for (const auto& n : list) write_node(out, n, depth);
}

}  // namespace

std::string clean_label(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    for (char c : label) {
        if (c != ' ' && c != '?') out += c;
    }
    return out;
}

TemplateDocument parse_template(std::string_view text) {
    auto root = xml::parse(text);
    if (root->name != "testset") throw ParseError("root element must be <testset>, found <" + root->name + ">");

    TemplateDocument doc;
    if (const auto* eps = root->child("endpoints")) {
        for (const auto& e : eps->children) doc.endpoints[e->name] = trim(e->text);
    }

    const auto* outer = root->child("description");
    const xml::Element* inner = outer ? outer->child("description") : nullptr;
    if (!inner) throw ParseError("missing /testset/description/description");

    doc.tree.root = TreeBuilder(doc.endpoints).sequence(*inner);
    validate(doc.tree);
    return doc;
}

TemplateDocument load_template(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open template '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    auto doc = parse_template(buf.str());
    doc.source_path = path.string();
    return doc;
}

std::string write_template(const TemplateDocument& doc) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<testset xmlns=\"http://cpee.org/ns/properties/2.0\">\n";
    out << "  <endpoints>\n";
    for (const auto& [name, url] : doc.endpoints) {
        out << "    <" << name << ">" << xml::escape(url) << "</" << name << ">\n";
    }
    out << "  </endpoints>\n";
    out << "  <description>\n";
    out << "    <description xmlns=\"http://cpee.org/ns/description/1.0\">\n";
    write_list(out, doc.tree.root, 3);
    out << "    </description>\n";
    out << "  </description>\n";
    out << "</testset>\n";
    return out.str();
}

}  // namespace procmine
