#pragma once

#include <string>
#include <vector>

#include "chainmail/calculus.hpp"

namespace chainmail {

// End-to-end run on a slope-annotated graph: validate, prove non-detection
// exhaustively, turn the trace into a base fact, strengthen every boundary to
// its surgery slope, fill everything, and conclude.  All outputs are
// deterministic functions of the input text; `jobs` only parallelizes the
// case enumeration.
struct PipelineResult {
    int exit_code = 0;  // 0 ok, 2 validation failure, 3 internal failure
    std::string error;  // set when exit_code != 0
    std::string trace_text;
    std::string facts_text;
    std::string report_text;
};

PipelineResult run_pipeline(const std::string& graph_text, unsigned jobs = 1);

// Validation half of the pipeline: parse, embedding genus, slope signs
// (edges negative; vertices positive or zero), and a positive-slope vertex in
// every component.  Returns the graph with V+ set to the positive-slope
// vertices, plus the chosen distinguished vertex (lowest-id positive slope).
struct ValidatedInput {
    PlanarGraph graph;
    std::string vo;
    bool any_zero_vertex = false;
};

ValidatedInput validate_pipeline_input(const std::string& graph_text); // throws Error

} // namespace chainmail
