#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "procmine/conformance.hpp"
#include "procmine/error.hpp"

namespace procmine::conformance {

namespace {

constexpr double kTieTolerance = 1e-12;

double metric(const FitnessTriple& f, int m) {
    switch (m) {
        case kMoveModel: return f.move_model;
        case kMoveLog: return f.move_log;
        default: return f.trace;
    }
}

std::vector<std::size_t> argmax_of(const std::vector<std::optional<FitnessTriple>>& cells, int m) {
    std::vector<std::size_t> out;
    double best = -1.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i]) continue;
        double v = metric(*cells[i], m);
        if (v > best + kTieTolerance) {
            best = v;
            out = {i};
        } else if (std::abs(v - best) <= kTieTolerance) {
            out.push_back(i);
        }
    }
    return out;
}

std::string format_double(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string join_names(const std::vector<std::size_t>& idx, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += '|';
        out += names[idx[i]];
    }
    return out;
}

}  // namespace

FitnessTable build_fitness_table(const logs::XesDocument& xes, const std::vector<NamedNet>& templates,
                                 const TableOptions& options) {
    FitnessTable table;
    for (const auto& t : templates) table.templates.push_back(t.name);

    // empty-trace cost per template; infeasible templates leave their cells empty
    std::vector<std::optional<std::uint64_t>> empty_cost(templates.size());
    for (std::size_t j = 0; j < templates.size(); ++j) {
        try {
            empty_cost[j] = empty_trace_cost(templates[j].net, options.costs, options.limits);
        } catch (const Error& ex) {
            table.warnings.push_back("template '" + templates[j].name + "': " + ex.what());
        }
    }

    // group identical traces by their classifier sequence
    std::map<std::string, std::size_t> group_of;
    std::vector<const logs::XesTrace*> representatives;
    for (const auto& trace : xes.traces) {
        std::string signature;
        for (const auto& e : trace.events) {
            signature += options.mapping == MappingKind::label ? e.get("concept:name") : e.get("cpee:endpoint");
            signature += '\x1f';
            signature += logs::event_phase(e);
            signature += '\x1e';
        }
        auto [it, inserted] = group_of.emplace(signature, table.rows.size());
        if (inserted) {
            FitnessRow row;
            row.group_id = trace.get("concept:name");
            row.cells.resize(templates.size());
            table.rows.push_back(std::move(row));
            representatives.push_back(&trace);
        }
        auto& row = table.rows[it->second];
        row.members.push_back(trace.get("concept:name"));
        ++row.multiplicity;
    }

    const std::size_t cells = table.rows.size() * templates.size();
    std::vector<std::string> cell_warnings(cells);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cells; k = next++) {
            std::size_t r = k / templates.size();
            std::size_t j = k % templates.size();
            if (!empty_cost[j]) continue;
            const auto& net = templates[j].net;
            MappedTrace mapped = map_trace(*representatives[r], options.mapping, net);
            try {
                Alignment a = align(net, mapped, options.costs, options.limits);
                table.rows[r].cells[j] = fitness(a, *empty_cost[j], mapped.size(), options.costs);
            } catch (const Error& ex) {
                cell_warnings[k] = "group '" + table.rows[r].group_id + "' / template '" + templates[j].name +
                                   "': " + ex.what();
            }
        }
    };
    unsigned jobs = std::max(1u, options.jobs);
    if (jobs == 1 || cells < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& w : cell_warnings) {
        if (!w.empty()) table.warnings.push_back(std::move(w));
    }

    for (auto& row : table.rows) {
        for (int m = 0; m < 3; ++m) row.argmax[m] = argmax_of(row.cells, m);
    }
    return table;
}

Assignment assign_template(const FitnessRow& row) {
    Assignment a;
    const auto& ml = row.argmax[kMoveLog];
    const auto& tr = row.argmax[kTrace];
    if (ml.empty() || tr.empty()) return a;

    std::vector<std::size_t> both;
    for (auto i : ml) {
        if (std::find(tr.begin(), tr.end(), i) != tr.end()) both.push_back(i);
    }
    if (!both.empty()) {
        a.template_index = both.front();
        a.tie = both.size() > 1;
        return a;
    }

    a.conflict = true;
    double best = -1.0;
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
        if (!row.cells[i]) continue;
        double joint = row.cells[i]->move_log + row.cells[i]->trace;
        if (joint > best + kTieTolerance) {
            best = joint;
            a.template_index = i;
            a.tie = false;
        } else if (std::abs(joint - best) <= kTieTolerance) {
            a.tie = true;
        }
    }
    return a;
}

std::string fitness_table_csv(const FitnessTable& table) {
    std::ostringstream out;
    out << "group_id,multiplicity";
    for (const auto& t : table.templates) {
        out << ',' << csv_field(t + "_move_model") << ',' << csv_field(t + "_move_log") << ','
            << csv_field(t + "_trace");
    }
    out << ",argmax_move_model,argmax_move_log,argmax_trace,conflict,assigned\n";
    for (const auto& row : table.rows) {
        out << csv_field(row.group_id) << ',' << row.multiplicity;
        for (const auto& cell : row.cells) {
            if (cell) {
                out << ',' << format_double(cell->move_model) << ',' << format_double(cell->move_log) << ','
                    << format_double(cell->trace);
            } else {
                out << ",,,";
            }
        }
        Assignment a = assign_template(row);
        for (int m = 0; m < 3; ++m) out << ',' << csv_field(join_names(row.argmax[m], table.templates));
        out << ',' << (a.conflict ? "true" : "false") << ','
            << (a.template_index ? csv_field(table.templates[*a.template_index]) : "") << '\n';
    }
    return out.str();
}

}  // namespace procmine::conformance
