#include <algorithm>
#include <iostream>

#include "commands.hpp"
#include "procmine/cli.hpp"
#include "procmine/error.hpp"
#include "procmine/io.hpp"

namespace procmine::cli {

std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix) {
    return path.parent_path() / (path.stem().string() + suffix);
}

namespace {

int rerun(const std::string& manifest, std::ostream& out, std::ostream& err) {
    auto j = Json::parse(read_file(manifest), nullptr, false);
    if (j.is_discarded() || !j.contains("argv") || !j["argv"].is_array()) {
        throw ValidationError("not a procmine manifest: " + manifest);
    }
    return run(j["argv"].get<std::vector<std::string>>(), out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx{out, err, 1, {}};
    Action action;
    std::string manifest;

    CLI::App app{"Process mining and machining-log analytics for CPEE workflows", "procmine"};
    app.require_subcommand(1);
    app.add_option("-j,--jobs", ctx.jobs, "Worker threads (results do not depend on it)")->check(CLI::Range(1u, 1024u));
    app.footer("Outputs default to $PROCMINE_OUT_DIR (or the current directory).");
    add_process_commands(app, ctx, action);
    add_analytics_commands(app, ctx, action);
    add_report_command(app, ctx, action);
    auto* re = app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
    re->add_option("manifest", manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);
    re->callback([&] { action = [&] { return rerun(manifest, out, err); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << "\n\n" << app.help();
        return 1;
    }

    // the manifest records the command line without --jobs
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a == "-j" || a == "--jobs") {
            ++i;
            continue;
        }
        if (a.rfind("--jobs=", 0) == 0 || (a.rfind("-j", 0) == 0 && a.size() > 2 && std::isdigit(static_cast<unsigned char>(a[2])))) continue;
        ctx.argv.push_back(a);
    }

    try {
        return action ? action() : 1;
    } catch (const procmine::Error& ex) {
        err << "error: " << ex.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& ex) {
        err << "error: " << ex.what() << '\n';
        return 1;
    } catch (const std::exception& ex) {
        err << "internal error: " << ex.what() << '\n';
        return 2;
    }
}

}  // namespace procmine::cli
