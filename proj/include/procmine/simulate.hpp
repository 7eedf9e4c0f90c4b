#pragma once

#include <random>

#include "procmine/template_parser.hpp"
#include "procmine/xes.hpp"

namespace procmine {

struct SimulationOptions {
    /// Loops run 1..max_loop_iterations times, chosen uniformly.
    unsigned max_loop_iterations = 3;
};

/// Plays one execution of the template the way the engine would log it:
/// a call yields a start (activity/calling) and a complete (activity/done)
/// event, a manipulate one complete event. Choose picks a branch uniformly,
/// parallel branches interleave uniformly at random, terminate ends the
/// trace. The returned trace carries only events; its attributes are empty.
logs::XesTrace simulate_trace(const TemplateDocument& doc, std::mt19937_64& rng,
                              const SimulationOptions& options = {});

}  // namespace procmine
