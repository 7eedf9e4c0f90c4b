#include "procmine/yaml_log.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "procmine/error.hpp"

namespace procmine::logs {

namespace {

const std::set<std::string>& standard_event_keys() {
    static const std::set<std::string> keys{"concept:name", "concept:endpoint", "id:id", "lifecycle:transition",
                                            "cpee:lifecycle:transition", "time:timestamp", "list"};
    return keys;
}

std::string scalar_or_empty(const YAML::Node& map, const char* key) {
    auto n = map[key];
    if (!n || n.IsNull()) return {};
    if (!n.IsScalar()) throw ParseError(std::string("'") + key + "' is not a scalar");
    return n.Scalar();
}

std::map<std::string, std::string> scalar_map(const YAML::Node& n) {
    std::map<std::string, std::string> out;
    if (!n || !n.IsMap()) return out;
    for (const auto& kv : n) {
        if (kv.second.IsScalar()) out[kv.first.Scalar()] = kv.second.Scalar();
    }
    return out;
}

void flatten(const YAML::Node& n, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
    if (n.IsScalar()) {
        out.emplace_back(path, n.Scalar());
    } else if (n.IsSequence()) {
        for (std::size_t i = 0; i < n.size(); ++i) flatten(n[i], path + "." + std::to_string(i), out);
    } else if (n.IsMap()) {
        for (const auto& kv : n) {
            const std::string& key = kv.first.Scalar();
            flatten(kv.second, path.empty() ? key : path + "." + key, out);
        }
    }
}

DataItem data_item(const YAML::Node& n) {
    DataItem item;
    if (!n.IsMap()) return item;
    for (const auto& kv : n) {
        const std::string& key = kv.first.Scalar();
        if (key == "meta") {
            item.meta = scalar_map(kv.second);
        } else if (kv.second.IsScalar()) {
            item.fields[key] = kv.second.Scalar();
        } else if (kv.second.IsNull()) {
            item.fields[key] = "";
        }
    }
    return item;
}

DataReceiverList payload(const YAML::Node& list) {
    DataReceiverList out;
    auto receivers = list["data_receiver"];
    if (!receivers || !receivers.IsSequence()) return out;
    for (const auto& r : receivers) {
        DataReceiver dr;
        auto data = r["data"];
        if (data && data.IsSequence()) {
            for (const auto& d : data) dr.data.push_back(data_item(d));
        } else if (data && data.IsMap()) {
            dr.data.push_back(data_item(data));
        }
        out.push_back(std::move(dr));
    }
    return out;
}

EventRecord event_record(const YAML::Node& ev, std::size_t doc_index) {
    auto where = [&](const std::string& msg) { return "event document " + std::to_string(doc_index) + ": " + msg; };
    if (!ev.IsMap()) throw ParseError(where("event is not a mapping"));
    EventRecord e;
    e.concept_name = scalar_or_empty(ev, "concept:name");
    e.endpoint = scalar_or_empty(ev, "concept:endpoint");
    e.id = scalar_or_empty(ev, "id:id");
    e.lifecycle = scalar_or_empty(ev, "lifecycle:transition");
    e.cpee_lifecycle = scalar_or_empty(ev, "cpee:lifecycle:transition");
    e.timestamp = scalar_or_empty(ev, "time:timestamp");
    if (e.cpee_lifecycle.empty()) throw ParseError(where("missing cpee:lifecycle:transition"));
    if (!is_iso8601(e.timestamp)) throw ParseError(where("timestamp '" + e.timestamp + "' is not ISO-8601"));
    if (auto list = ev["list"]) e.payload = payload(list);
    for (const auto& kv : ev) {
        const std::string& key = kv.first.Scalar();
        if (key == "list") {
            flatten(kv.second, "list", e.scalars);
        } else if (!standard_event_keys().count(key)) {
            flatten(kv.second, key, e.scalars);
        }
    }
    return e;
}

}  // namespace

bool is_iso8601(std::string_view timestamp) {
    static const std::regex re(R"(^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}(:?\d{2})?)?)?$)");
    return std::regex_match(timestamp.begin(), timestamp.end(), re);
}

TraceRecord parse_yaml_trace(std::string_view text) {
    std::vector<YAML::Node> docs;
    try {
        docs = YAML::LoadAll(std::string(text));
    } catch (const YAML::Exception& ex) {
        throw ParseError("YAML syntax error: " + ex.msg, static_cast<std::size_t>(ex.mark.line + 1));
    }

    TraceRecord trace;
    bool have_log = false;
    std::size_t index = 0;
    for (const auto& doc : docs) {
        ++index;
        if (!doc.IsMap()) continue;
        try {
            if (auto log = doc["log"]) {
                have_log = true;
                auto t = log["trace"];
                if (!t) throw ParseError("log document without trace section");
                trace.concept_name = scalar_or_empty(t, "concept:name");
                trace.cpee_name = scalar_or_empty(t, "cpee:name");
                trace.uuid = scalar_or_empty(t, "cpee:uuid");
                trace.header.extensions = scalar_map(log["extension"]);
                if (auto g = log["global"]) {
                    trace.header.global_trace = scalar_map(g["trace"]);
                    trace.header.global_event = scalar_map(g["event"]);
                }
            }
            if (auto ev = doc["event"]) trace.events.push_back(event_record(ev, index));
        } catch (const YAML::Exception& ex) {
            throw ParseError("document " + std::to_string(index) + ": " + ex.msg);
        }
    }
    if (!have_log) throw ParseError("no log document");
    if (trace.concept_name.empty()) throw ParseError("log document without trace concept:name");
    return trace;
}

TraceRecord load_yaml_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open log '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        auto t = parse_yaml_trace(buf.str());
        t.source_path = path.string();
        return t;
    } catch (const ParseError& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
}

std::vector<std::filesystem::path> read_path_list(const std::filesystem::path& list_file) {
    std::ifstream in(list_file);
    if (!in) throw Error("cannot open path list '" + list_file.string() + "'");
    std::vector<std::filesystem::path> out;
    std::string line;
    while (std::getline(in, line)) {
        auto b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r\n");
        out.emplace_back(line.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace procmine::logs
