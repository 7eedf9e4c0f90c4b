#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "procmine/yaml_log.hpp"

namespace procmine::logs {

struct XesAttribute {
    std::string type;  // string, date, int, float, boolean, id
    std::string key;
    std::string value;
    bool operator==(const XesAttribute&) const = default;
};

struct XesExtension {
    std::string name;
    std::string prefix;
    std::string uri;
    bool operator==(const XesExtension&) const = default;
};

struct XesClassifier {
    std::string name;
    std::string keys;  // space separated attribute keys
    bool operator==(const XesClassifier&) const = default;
};

struct XesEvent {
    std::vector<XesAttribute> attributes;
    /// Value of the first attribute with this key, empty when absent.
    const std::string& get(std::string_view key) const;
    bool operator==(const XesEvent&) const = default;
};

struct XesTrace {
    std::vector<XesAttribute> attributes;
    std::vector<XesEvent> events;
    const std::string& get(std::string_view key) const;
    bool operator==(const XesTrace&) const = default;
};

struct XesDocument {
    std::vector<XesExtension> extensions;
    std::vector<XesAttribute> global_trace;
    std::vector<XesAttribute> global_event;
    std::vector<XesClassifier> classifiers;
    std::vector<XesTrace> traces;
    bool operator==(const XesDocument&) const = default;
};

/// Default value of the global `time:timestamp` event attribute.
inline constexpr std::string_view kDefaultGlobalTimestamp = "1990-02-17T09:45:00.000+01:00";

/// The six classifiers written into every document, in order.
const std::vector<XesClassifier>& standard_classifiers();

/// Only `activity/calling` and `activity/done` events are kept. The header
/// (extensions, globals) is taken from the first trace; defaults are used
/// when the list is empty.
XesDocument build_xes(const std::vector<TraceRecord>& traces);

/// Event with the six standard attributes (concept:name, cpee:endpoint,
/// id:id, lifecycle:transition, cpee:lifecycle:transition, time:timestamp).
XesEvent make_event(const std::string& concept_name, const std::string& endpoint, const std::string& id,
                    const std::string& lifecycle, const std::string& cpee_lifecycle, const std::string& timestamp);

std::string serialize_xes(const XesDocument& doc);

/// Reads XES XML back. Nested attributes are ignored.
XesDocument parse_xes(std::string_view xml);
XesDocument load_xes(const std::filesystem::path& path);

/// `activity/calling` -> start, `activity/done` -> complete; otherwise the
/// plain `lifecycle:transition` value.
std::string event_phase(const XesEvent& e);

}  // namespace procmine::logs
