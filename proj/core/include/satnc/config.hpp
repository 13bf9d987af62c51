#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satnc/constellation.hpp"
#include "satnc/field.hpp"
#include "satnc/linkbudget.hpp"

namespace satnc {

struct RunConfig {
    double duration_s = 86400.0;
    double dt_s = 60.0;
    /// 0-based internally; 1-based in files and flags.
    int source = 0;
    std::vector<int> sinks{5, 12, 14};
    FieldSpec field{8};
    /// Use the smallest field whose order exceeds the number of served sinks.
    bool min_field = false;
    /// Bits per edge copy; defaults to the link data rate.
    std::optional<double> unit_bps;
    double threshold = 2.1;
    /// Extra randomized path searches when the PLG turns out cyclic.
    int retry_paths = 0;
    std::uint64_t seed = 1;
    /// Code rate; defaults to the smallest max-flow among reachable sinks.
    std::optional<int> rate;
};

struct IoConfig {
    std::filesystem::path output_dir = "out";
    std::optional<std::filesystem::path> range_import;
    std::optional<std::filesystem::path> graph_import;
    std::optional<std::filesystem::path> paths_import;
};

struct ScenarioConfig {
    ConstellationSpec constellation;
    LinkParams link;
    RunConfig run;
    IoConfig io;

    double unit_bps() const { return run.unit_bps.value_or(link.r_bps); }
    /// Throws ConfigError.
    void validate() const;
};

/// INI text with [constellation], [link], [run] and [io] sections. Missing
/// keys keep their defaults; unknown keys are errors. Relative io paths are
/// resolved against `base_dir`.
ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& file);

/// Sets one `section.key` value as it would appear in the file.
void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value,
                    const std::filesystem::path& base_dir = {});

/// Every settable key, `section.key`.
std::vector<std::string> config_keys();

/// Writes the effective configuration in the same INI layout.
void write_config(const ScenarioConfig& cfg, std::ostream& out);

/// Parses "6,13,15" (1-based) into 0-based ids.
std::vector<int> parse_node_list(std::string_view text);
std::string format_node_list(const std::vector<int>& nodes);

}  // namespace satnc
