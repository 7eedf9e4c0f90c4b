#include <map>

#include "commands.hpp"
#include "procmine/conformance.hpp"
#include "procmine/error.hpp"
#include "procmine/io.hpp"
#include "procmine/machining.hpp"
#include "procmine/net_transform.hpp"
#include "procmine/template_parser.hpp"
#include "procmine/tpn.hpp"
#include "procmine/xes.hpp"
#include "procmine/yaml_log.hpp"

namespace procmine::cli {

namespace fs = std::filesystem;

namespace {

std::vector<logs::TraceRecord> load_traces(const std::vector<std::string>& items, const std::string& list,
                                           Manifest& m) {
    auto paths = expand_inputs(items, ".yaml");
    if (!list.empty()) {
        m.input(list);
        for (auto& p : logs::read_path_list(list)) paths.push_back(p);
    }
    if (paths.empty()) throw ValidationError("no YAML logs given");
    std::vector<logs::TraceRecord> traces;
    for (const auto& p : paths) {
        m.input(p);
        traces.push_back(logs::load_yaml_trace(p));
    }
    return traces;
}

conformance::NamedNet load_template_net(const fs::path& p) {
    conformance::NamedNet n;
    n.name = p.stem().string();
    if (p.extension() == ".tpn") {
        n.net = finalize_net(parse_tpn(read_file(p)));
    } else {
        n.net = template_to_net(load_template(p));
    }
    return n;
}

struct ToTpn {
    std::string input, output;
};

int to_tpn(Context& ctx, const ToTpn& o) {
    Manifest m(ctx, "to-tpn");
    m.input(o.input);
    fs::path out = o.output.empty() ? default_out_dir() / (fs::path(o.input).stem().string() + ".tpn") : fs::path(o.output);
    auto net = template_to_net(load_template(o.input));
    emit(m, out, emit_tpn(net));
    write_manifest(m, sibling(out, ".manifest.json"));
    ctx.out << "wrote " << out.generic_string() << " (" << net.places().size() << " places, "
            << net.transitions().size() << " transitions)\n";
    return 0;
}

struct YamlToXes {
    std::vector<std::string> inputs;
    std::string list, output;
};

int yaml_to_xes(Context& ctx, const YamlToXes& o) {
    Manifest m(ctx, "yaml-to-xes");
    auto traces = load_traces(o.inputs, o.list, m);
    fs::path out = o.output.empty() ? default_out_dir() / "logs.xes" : fs::path(o.output);
    auto doc = logs::build_xes(traces);
    std::size_t events = 0;
    for (const auto& t : doc.traces) events += t.events.size();
    emit(m, out, logs::serialize_xes(doc));
    write_manifest(m, sibling(out, ".manifest.json"));
    ctx.out << "wrote " << out.generic_string() << " (" << doc.traces.size() << " traces, " << events << " events)\n";
    return 0;
}

struct ExtractCsv {
    std::vector<std::string> inputs;
    std::string list, out_dir;
};

int extract_csv(Context& ctx, const ExtractCsv& o) {
    Manifest m(ctx, "extract-csv");
    auto traces = load_traces(o.inputs, o.list, m);
    fs::path dir = o.out_dir.empty() ? default_out_dir() / "machining" : fs::path(o.out_dir);
    std::size_t files = 0;
    for (const auto& t : traces) {
        auto rows = logs::extract_machining_rows(t);
        if (rows.empty()) continue;
        std::vector<std::string> warnings;
        std::string text = logs::machining_csv_text(rows, &warnings);
        for (const auto& w : warnings) warn(ctx, m, "trace " + t.concept_name + ": " + w);
        emit(m, dir / ("log" + t.concept_name + ".csv"), text);
        ++files;
    }
    write_manifest(m, dir / "manifest.json");
    ctx.out << "wrote " << files << " machining CSV file(s) to " << dir.generic_string() << '\n';
    return 0;
}

struct Conformance {
    std::string log, output, mapping = "label";
    std::vector<std::string> templates;
    std::size_t max_states = conformance::SearchLimits{}.max_states;
};

int run_conformance(Context& ctx, const Conformance& o) {
    Manifest m(ctx, "conformance");
    m.config["mapping"] = o.mapping;
    m.config["max_states"] = o.max_states;
    conformance::TableOptions opt;
    opt.mapping = conformance::parse_mapping_kind(o.mapping);
    opt.limits.max_states = o.max_states;
    opt.jobs = ctx.jobs;

    m.input(o.log);
    auto xes = logs::load_xes(o.log);
    std::vector<conformance::NamedNet> nets;
    for (const auto& t : o.templates) {
        m.input(t);
        nets.push_back(load_template_net(t));
        try {
            conformance::empty_trace_cost(nets.back().net, opt.costs, opt.limits);
        } catch (const ModelInfeasible& ex) {
            throw ModelInfeasible("model infeasible: template '" + nets.back().name + "': " + ex.what());
        }
    }
    auto table = conformance::build_fitness_table(xes, nets, opt);
    for (const auto& w : table.warnings) warn(ctx, m, w);

    fs::path out = o.output.empty() ? default_out_dir() / "fitness.csv" : fs::path(o.output);
    emit(m, out, conformance::fitness_table_csv(table));
    write_manifest(m, sibling(out, ".manifest.json"));

    std::vector<std::size_t> assigned(nets.size(), 0);
    std::size_t conflicts = 0, unassigned = 0;
    for (const auto& row : table.rows) {
        auto a = conformance::assign_template(row);
        if (a.template_index) assigned[*a.template_index] += row.multiplicity;
        else unassigned += row.multiplicity;
        if (a.conflict) conflicts += row.multiplicity;
    }
    ctx.out << "traces: " << xes.traces.size() << ", groups: " << table.rows.size() << '\n';
    for (std::size_t i = 0; i < nets.size(); ++i) ctx.out << "  " << nets[i].name << ": " << assigned[i] << '\n';
    if (unassigned) ctx.out << "  unassigned: " << unassigned << '\n';
    ctx.out << "conflicts: " << conflicts << '\n';
    return 0;
}

}  // namespace

void add_process_commands(CLI::App& app, Context& ctx, Action& action) {
    {
        auto o = std::make_shared<ToTpn>();
        auto* sub = app.add_subcommand("to-tpn", "Convert a CPEE template to a TPN Petri net");
        sub->add_option("template", o->input, "Template XML")->required()->check(CLI::ExistingFile);
        sub->add_option("output", o->output, "Output TPN (default $PROCMINE_OUT_DIR/<stem>.tpn)");
        sub->callback([&, o] { action = [&ctx, o] { return to_tpn(ctx, *o); }; });
    }
    {
        auto o = std::make_shared<YamlToXes>();
        auto* sub = app.add_subcommand("yaml-to-xes", "Merge CPEE YAML logs into one XES log");
        sub->add_option("inputs", o->inputs, "YAML files or directories");
        sub->add_option("--list,--paths", o->list, "File with one YAML path per line")->check(CLI::ExistingFile);
        sub->add_option("-o,--out", o->output, "Output XES (default $PROCMINE_OUT_DIR/logs.xes)");
        sub->callback([&, o] { action = [&ctx, o] { return yaml_to_xes(ctx, *o); }; });
    }
    {
        auto o = std::make_shared<ExtractCsv>();
        auto* sub = app.add_subcommand("extract-csv", "Write machining CSV files from CPEE YAML logs");
        sub->add_option("inputs", o->inputs, "YAML files or directories");
        sub->add_option("--list,--paths", o->list, "File with one YAML path per line")->check(CLI::ExistingFile);
        sub->add_option("-o,--out-dir,--outdir", o->out_dir, "Output directory (default $PROCMINE_OUT_DIR/machining)");
        sub->callback([&, o] { action = [&ctx, o] { return extract_csv(ctx, *o); }; });
    }
    {
        auto o = std::make_shared<Conformance>();
        auto* sub = app.add_subcommand("conformance", "Align a log against templates and build the fitness table");
        sub->add_option("--log", o->log, "XES log")->required()->check(CLI::ExistingFile);
        sub->add_option("-t,--template", o->templates, "Template (.xml or .tpn); repeatable")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--mapping", o->mapping, "Event to transition mapping")
            ->check(CLI::IsMember({"label", "endpoint"}));
        sub->add_option("--max-states", o->max_states, "Search state limit per alignment");
        sub->add_option("-o,--out", o->output, "Output CSV (default $PROCMINE_OUT_DIR/fitness.csv)");
        sub->callback([&, o] { action = [&ctx, o] { return run_conformance(ctx, *o); }; });
    }
}

}  // namespace procmine::cli
