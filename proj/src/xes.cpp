#include "procmine/xes.hpp"

#include <fstream>
#include <sstream>

#include "procmine/error.hpp"
#include "procmine/xml.hpp"

namespace procmine::logs {

namespace {

const std::string kEmpty;

const std::string& find_attr(const std::vector<XesAttribute>& attrs, std::string_view key) {
    for (const auto& a : attrs) {
        if (a.key == key) return a.value;
    }
    return kEmpty;
}

std::string lookup(const std::map<std::string, std::string>& m, const std::string& key, std::string fallback) {
    auto it = m.find(key);
    return it == m.end() ? std::move(fallback) : it->second;
}

void write_attribute(std::ostringstream& out, const XesAttribute& a, int depth) {
    out << std::string(static_cast<std::size_t>(depth), '\t') << '<' << a.type << " key=\"" << xml::escape(a.key)
        << "\" value=\"" << xml::escape(a.value) << "\"/>\n";
}

bool is_attribute_tag(const std::string& tag) {
    return tag == "string" || tag == "date" || tag == "int" || tag == "float" || tag == "boolean" || tag == "id";
}

std::vector<XesAttribute> read_attributes(const xml::Element& el) {
    std::vector<XesAttribute> out;
    for (const auto& c : el.children) {
        if (!is_attribute_tag(c->name)) continue;
        const auto* key = c->attribute("key");
        const auto* value = c->attribute("value");
        if (!key) throw ParseError("XES attribute without key", c->line);
        out.push_back({c->name, *key, value ? *value : ""});
    }
    return out;
}

}  // namespace

const std::string& XesEvent::get(std::string_view key) const { return find_attr(attributes, key); }
const std::string& XesTrace::get(std::string_view key) const { return find_attr(attributes, key); }

const std::vector<XesClassifier>& standard_classifiers() {
    static const std::vector<XesClassifier> c{
        {"Event ID Transition Classifier", "id:id lifecycle:transition"},
        {"MXML Legacy Classifier", "concept:name lifecycle:transition"},
        {"Event Name", "concept:name"},
        {"Event ID", "id:id"},
        {"CPEE Classifier", "concept:name cpee:lifecycle:transition"},
        {"CPEE Endpoint", "cpee:endpoint cpee:lifecycle:transition"},
    };
    return c;
}

XesEvent make_event(const std::string& concept_name, const std::string& endpoint, const std::string& id,
                    const std::string& lifecycle, const std::string& cpee_lifecycle, const std::string& timestamp) {
    return XesEvent{{
        {"string", "concept:name", concept_name},
        {"string", "cpee:endpoint", endpoint},
        {"string", "id:id", id},
        {"string", "lifecycle:transition", lifecycle},
        {"string", "cpee:lifecycle:transition", cpee_lifecycle},
        {"date", "time:timestamp", timestamp},
    }};
}

XesDocument build_xes(const std::vector<TraceRecord>& traces) {
    XesDocument doc;
    LogHeader header;
    if (!traces.empty()) header = traces.front().header;
    const auto& ext = header.extensions;
    doc.extensions = {
        {"Time", "time", lookup(ext, "time", "http://www.xes-standard.org/time.xesext")},
        {"Concept", "concept", lookup(ext, "concept", "http://www.xes-standard.org/concept.xesext")},
        {"Organizational", "org", lookup(ext, "organisational", "http://www.xes-standard.org/org.xesext")},
        {"Lifecycle", "lifecycle", lookup(ext, "lifecycle", "http://www.xes-standard.org/lifecycle.xesext")},
    };
    const auto& gt = header.global_trace;
    doc.global_trace = {
        {"string", "concept:name", lookup(gt, "concept:name", "__INVALID__")},
        {"string", "cpee:name", lookup(gt, "cpee:name", "__INVALID__")},
    };
    // cpee:endpoint is sourced from concept:endpoint in the YAML header.
    const auto& ge = header.global_event;
    doc.global_event = {
        {"string", "concept:name", lookup(ge, "concept:name", "__INVALID__")},
        {"string", "cpee:endpoint", lookup(ge, "concept:endpoint", "")},
        {"string", "id:id", lookup(ge, "id:id", "__INVALID__")},
        {"string", "lifecycle:transition", lookup(ge, "lifecycle:transition", "complete")},
        {"string", "cpee:lifecycle:transition", lookup(ge, "cpee:lifecycle:transition", "activity/calling")},
        {"date", "time:timestamp", std::string(kDefaultGlobalTimestamp)},
    };
    doc.classifiers = standard_classifiers();

    for (const auto& t : traces) {
        XesTrace xt;
        xt.attributes = {
            {"string", "concept:name", t.concept_name},
            {"string", "cpee:name", t.cpee_name},
            {"string", "cpee:uuid", t.uuid},
        };
        for (const auto& e : t.events) {
            if (e.cpee_lifecycle != "activity/calling" && e.cpee_lifecycle != "activity/done") continue;
            xt.events.push_back(make_event(e.concept_name, e.endpoint, e.id, e.lifecycle, e.cpee_lifecycle, e.timestamp));
        }
        doc.traces.push_back(std::move(xt));
    }
    return doc;
}

std::string serialize_xes(const XesDocument& doc) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" ?>\n";
    out << "<log openxes.version=\"1.0RC7\" xes.features=\"nested-attributes\" xes.version=\"1.0\" "
           "xmlns=\"http://www.xes-standard.org/\">\n";
    for (const auto& e : doc.extensions) {
        out << "\t<extension name=\"" << xml::escape(e.name) << "\" prefix=\"" << xml::escape(e.prefix) << "\" uri=\""
            << xml::escape(e.uri) << "\"/>\n";
    }
    out << "\t<global scope=\"trace\">\n";
    for (const auto& a : doc.global_trace) write_attribute(out, a, 2);
    out << "\t</global>\n";
    out << "\t<global scope=\"event\">\n";
    for (const auto& a : doc.global_event) write_attribute(out, a, 2);
    out << "\t</global>\n";
    for (const auto& c : doc.classifiers) {
        out << "\t<classifier keys=\"" << xml::escape(c.keys) << "\" name=\"" << xml::escape(c.name) << "\"/>\n";
    }
    for (const auto& t : doc.traces) {
        out << "\t<trace>\n";
        for (const auto& a : t.attributes) write_attribute(out, a, 2);
        for (const auto& e : t.events) {
            out << "\t\t<event>\n";
            for (const auto& a : e.attributes) write_attribute(out, a, 3);
            out << "\t\t</event>\n";
        }
        out << "\t</trace>\n";
    }
    out << "</log>\n";
    return out.str();
}

XesDocument parse_xes(std::string_view text) {
    auto root = xml::parse(text);
    if (root->name != "log") throw ParseError("XES root element must be <log>");
    XesDocument doc;
    for (const auto& c : root->children) {
        if (c->name == "extension") {
            auto get = [&](const char* k) {
                const auto* v = c->attribute(k);
                return v ? *v : std::string();
            };
            doc.extensions.push_back({get("name"), get("prefix"), get("uri")});
        } else if (c->name == "global") {
            const auto* scope = c->attribute("scope");
            auto attrs = read_attributes(*c);
            if (scope && *scope == "trace") {
                doc.global_trace = std::move(attrs);
            } else {
                doc.global_event = std::move(attrs);
            }
        } else if (c->name == "classifier") {
            const auto* name = c->attribute("name");
            const auto* keys = c->attribute("keys");
            doc.classifiers.push_back({name ? *name : "", keys ? *keys : ""});
        } else if (c->name == "trace") {
            XesTrace t;
            t.attributes = read_attributes(*c);
            for (const auto& e : c->children) {
                if (e->name == "event") t.events.push_back(XesEvent{read_attributes(*e)});
            }
            doc.traces.push_back(std::move(t));
        }
    }
    return doc;
}

XesDocument load_xes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open XES file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_xes(buf.str());
}

std::string event_phase(const XesEvent& e) {
    const auto& cpee = e.get("cpee:lifecycle:transition");
    if (cpee == "activity/calling") return "start";
    if (cpee == "activity/done") return "complete";
    return e.get("lifecycle:transition");
}

}  // namespace procmine::logs
