#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "procmine/yaml_log.hpp"

namespace procmine::logs {

/// One line of a machining CSV. Field order is fixed:
/// Id, source, name, description, path, value, timestamp, StatusCode,
/// ServerTimestamp, VariantType, ClientHandle.
struct MachiningRow {
    static constexpr std::size_t kFieldCount = 11;
    std::array<std::string, kFieldCount> fields;

    const std::string& id() const { return fields[0]; }
    const std::string& value() const { return fields[5]; }
    const std::string& timestamp() const { return fields[6]; }
    const std::string& server_timestamp() const { return fields[8]; }
    bool operator==(const MachiningRow&) const = default;
};

const std::array<std::string, MachiningRow::kFieldCount>& machining_header();

/// Rows for every `Fetch` event with cpee lifecycle `activity/receiving`:
/// one row per data item of each data_receiver, or a timestamp-only row
/// when the event has no `list`.
std::vector<MachiningRow> extract_machining_rows(const TraceRecord& trace);

struct CsvWriteResult {
    std::filesystem::path path;
    std::size_t rows_written = 0;
    std::vector<std::string> warnings;  // rows dropped because a field contains '*'
};

/// Star-joined text: header line plus one line per row.
std::string machining_csv_text(const std::vector<MachiningRow>& rows, std::vector<std::string>* warnings = nullptr);

/// Writes `<dir>/log<trace_name>.csv`.
CsvWriteResult write_machining_csv(const std::vector<MachiningRow>& rows, const std::string& trace_name,
                                   const std::filesystem::path& dir);

}  // namespace procmine::logs
