#include "procmine/machining.hpp"

#include "procmine/io.hpp"

namespace procmine::logs {

namespace {

std::string rstrip(std::string s) {
    auto e = s.find_last_not_of(" \t\r\n\f\v");
    s.erase(e == std::string::npos ? 0 : e + 1);
    return s;
}

std::string field(const std::map<std::string, std::string>& m, const char* key) {
    auto it = m.find(key);
    return it == m.end() ? std::string() : it->second;
}

}  // namespace

const std::array<std::string, MachiningRow::kFieldCount>& machining_header() {
    static const std::array<std::string, MachiningRow::kFieldCount> h{
        "Id", "source", "name", "description", "path", "value", "timestamp",
        "StatusCode", "ServerTimestamp", "VariantType", "ClientHandle"};
    return h;
}

std::vector<MachiningRow> extract_machining_rows(const TraceRecord& trace) {
    std::vector<MachiningRow> rows;
    for (const auto& e : trace.events) {
        if (e.cpee_lifecycle != "activity/receiving" || e.concept_name != "Fetch") continue;
        if (!e.payload) {
            MachiningRow r;
            r.fields[6] = e.timestamp;
            rows.push_back(std::move(r));
            continue;
        }
        for (const auto& receiver : *e.payload) {
            for (const auto& item : receiver.data) {
                MachiningRow r;
                r.fields = {field(item.fields, "ID"),
                            field(item.fields, "source"),
                            field(item.fields, "name"),
                            field(item.fields, "description"),
                            field(item.fields, "path"),
                            rstrip(field(item.fields, "value")),
                            field(item.fields, "timestamp"),
                            field(item.meta, "StatusCode"),
                            field(item.meta, "ServerTimestamp"),
                            field(item.meta, "VariantType"),
                            field(item.meta, "ClientHandle")};
                rows.push_back(std::move(r));
            }
        }
    }
    return rows;
}

std::string machining_csv_text(const std::vector<MachiningRow>& rows, std::vector<std::string>* warnings) {
    auto join = [](const auto& fields) {
        std::string line;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) line += '*';
            line += fields[i];
        }
        line += '\n';
        return line;
    };
    std::string out = join(machining_header());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool bad = false;
        for (const auto& f : rows[i].fields) bad = bad || f.find('*') != std::string::npos;
        if (bad) {
            if (warnings) warnings->push_back("row " + std::to_string(i + 1) + " dropped: field contains '*'");
            continue;
        }
        out += join(rows[i].fields);
    }
    return out;
}

CsvWriteResult write_machining_csv(const std::vector<MachiningRow>& rows, const std::string& trace_name,
                                   const std::filesystem::path& dir) {
    CsvWriteResult result;
    result.path = dir / ("log" + trace_name + ".csv");
    std::string text = machining_csv_text(rows, &result.warnings);
    result.rows_written = rows.size() - result.warnings.size();
    write_file_atomic(result.path, text);
    return result;
}

}  // namespace procmine::logs
