// Run configuration: JSON parsing with collected semantic errors, and the
// inverse serialization used by the round-trip tests.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdsym/experiments.hpp"

namespace rdsym {

struct OutputConfig {
    std::string directory = "out";
    bool snapshots = false;
    long snapshot_stride = 1;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
    SolverConfig solver; // carries the grid
    ReactionTerm reaction;
    Scenario scenario;
    OutputConfig output;
    int rays = 720;
    double late_window_fraction = 0.5;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ParseResult {
    std::optional<RunConfig> config;
    std::vector<std::string> errors; // empty iff config is present

    bool ok() const { return config.has_value() && errors.empty(); }
};

// Parses and validates; all invariant violations are reported together.
ParseResult parse_config(const std::string& text);

std::string serialize_config(const RunConfig& config);

// Reaction section only (plus the optional steepness lower bound "g"), for
// the validate-reaction command.
struct ReactionSection {
    std::optional<ReactionTerm> reaction;
    std::optional<ReactionTerm> lower_bound_g;
    std::vector<std::string> errors;
};

ReactionSection parse_reaction_section(const std::string& text);

} // namespace rdsym
