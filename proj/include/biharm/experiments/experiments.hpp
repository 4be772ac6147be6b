#pragma once

/// Named experiments behind the CLI subcommands. Each takes its config
/// section (an empty object selects the defaults) and returns a report.
/// Invalid sections throw ConfigError before any numerical work starts;
/// numerical failures surface as biharm::Error.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biharm/experiments/report.hpp"

namespace biharm::experiments {

struct RunOptions {
    /// Replaces the seed of randomized presets.
    std::optional<std::uint64_t> seed;
};

RunReport run_residual(const Json& section, const RunOptions& opts = {});
RunReport run_ansatz(const Json& section, const RunOptions& opts = {});
RunReport run_ode(const Json& section, const RunOptions& opts = {});
RunReport run_isoparam(const Json& section, const RunOptions& opts = {});
RunReport run_counterexample_41a(const Json& section, const RunOptions& opts = {});
RunReport run_submersion(const Json& section, const RunOptions& opts = {});

/// Subcommand names in the order `all` runs them.
const std::vector<std::string>& experiment_names();

RunReport run_experiment(const std::string& name, const Json& section,
                         const RunOptions& opts = {});

} // namespace biharm::experiments
