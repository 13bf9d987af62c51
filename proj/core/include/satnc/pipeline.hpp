#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "satnc/code.hpp"
#include "satnc/config.hpp"
#include "satnc/constellation.hpp"
#include "satnc/dynamics.hpp"
#include "satnc/multigraph.hpp"
#include "satnc/paths.hpp"
#include "satnc/plg.hpp"

namespace satnc {

enum ExitCode : int {
    kExitOk = 0,
    kExitSinkUnserved = 1,
    kExitCncRequired = 2,
    kExitConfig = 3,
};

/// The range import, or a fresh propagation over the configured duration.
RangeSeries load_ranges(const ScenarioConfig& cfg);

/// The graph import, or ranges turned into quantized capacity graphs.
GraphSeries load_graphs(const ScenarioConfig& cfg);

/// One quantized snapshot at `t_s`; throws ConfigError when it does not exist.
MultiGraph load_graph_at(const ScenarioConfig& cfg, double t_s);

Scenario make_scenario(const ScenarioConfig& cfg, GraphSeries graphs);

struct CodeOutcome {
    int exit_code = kExitOk;
    std::string message;
    int rate = 0;
    FieldSpec field;
    PathSet paths;
    MultiGraph pruned;
    std::optional<Plg> plg;
    std::optional<NetworkCode> code;
    std::optional<SinkReport> report;
    /// Offending PLG cycle when a convolutional code would be needed.
    std::string cycle;
    /// Randomized path searches performed after the first cyclic PLG.
    int retries_used = 0;
};

/// Paths, pruning, PLG, construction and verification on one graph.
CodeOutcome run_code(const ScenarioConfig& cfg, const MultiGraph& g);

int cmd_propagate(const ScenarioConfig& cfg, std::ostream& log);
int cmd_code(const ScenarioConfig& cfg, double t_min, std::ostream& log);
int cmd_rates(const ScenarioConfig& cfg, std::ostream& log);
/// Criteria for the configured scenario, printed and written to criteria.csv.
int cmd_criteria(const ScenarioConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace satnc
