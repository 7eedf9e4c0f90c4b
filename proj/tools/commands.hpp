#pragma once

#include <functional>

#include <CLI11.hpp>

#include "support.hpp"

namespace procmine::cli {

using Action = std::function<int()>;

void add_process_commands(CLI::App& app, Context& ctx, Action& action);
void add_analytics_commands(CLI::App& app, Context& ctx, Action& action);
void add_report_command(CLI::App& app, Context& ctx, Action& action);

/// `dir/stem<suffix>` next to `path`.
std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix);

}  // namespace procmine::cli
