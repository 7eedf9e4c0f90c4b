#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace procmine::logs {

/// One entry of a data_receiver `data` list. `fields` holds the scalar
/// keys (ID, source, name, value, ...), `meta` the nested meta map.
struct DataItem {
    std::map<std::string, std::string> fields;
    std::map<std::string, std::string> meta;
};

struct DataReceiver {
    std::vector<DataItem> data;
};

using DataReceiverList = std::vector<DataReceiver>;

struct EventRecord {
    std::string concept_name;
    std::string endpoint;  // `concept:endpoint`, empty when absent
    std::string id;
    std::string lifecycle;
    std::string cpee_lifecycle;
    std::string timestamp;
    /// Present iff the event carries a `list` entry.
    std::optional<DataReceiverList> payload;
    /// Every other scalar of the event as (dotted path, value), file order.
    std::vector<std::pair<std::string, std::string>> scalars;
};

/// Header information of the `log` document, used for the XES header.
struct LogHeader {
    std::map<std::string, std::string> extensions;     // log.extension
    std::map<std::string, std::string> global_trace;   // log.global.trace
    std::map<std::string, std::string> global_event;   // log.global.event
};

struct TraceRecord {
    std::string concept_name;
    std::string cpee_name;
    std::string uuid;
    LogHeader header;
    std::vector<EventRecord> events;
    std::string source_path;
};

/// Parses a multi-document CPEE YAML log: one `log` document and any
/// number of `event` documents. Throws ParseError on YAML syntax errors,
/// a missing `log` document, an event without `cpee:lifecycle:transition`
/// or a timestamp that is not ISO-8601.
TraceRecord parse_yaml_trace(std::string_view text);

TraceRecord load_yaml_trace(const std::filesystem::path& path);

bool is_iso8601(std::string_view timestamp);

/// Reads a path list (one path per line, whitespace-stripped, blank lines
/// skipped). Relative paths stay relative to the working directory.
std::vector<std::filesystem::path> read_path_list(const std::filesystem::path& list_file);

}  // namespace procmine::logs
