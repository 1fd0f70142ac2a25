#pragma once

#include "mempoolsim/engine.hpp"
#include "mempoolsim/game.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mempoolsim {

struct GameSettings {
    GameMode mode = GameMode::TwoMiner;
    std::vector<Strategy> strategies = {Strategy::FeeBased, Strategy::FeePerByte, Strategy::Fifo};
    std::vector<std::uint64_t> capacities = {1 * kMegabyte, 2 * kMegabyte};
    std::size_t replications = 20;
    bool common_random_numbers = false;

    bool operator==(const GameSettings&) const = default;
};

/// Everything one CLI invocation needs: a base run plus the sweep grid.
struct ExperimentSpec {
    SimConfig base;
    std::vector<std::uint64_t> sweep_capacities;
    std::vector<Strategy> sweep_strategies = {Strategy::FeePerByte, Strategy::FeeBased,
                                              Strategy::Fifo};
    std::size_t replications = 1;
    std::string output_dir = "results";
    /// Worker threads for independent runs; 0 picks the hardware count.
    unsigned threads = 0;
    GameSettings game;

    ExperimentSpec();

    /// Throws ConfigError naming the config key at fault.
    void validate() const;

    bool operator==(const ExperimentSpec&) const = default;
};

/// Parses config text; unspecified keys take their defaults. Unknown keys
/// and type mismatches raise ParseError with the line, invariant
/// violations ConfigError with the key.
ExperimentSpec parse_config(std::string_view text);

/// Reads and parses a config file; IoError if it cannot be read.
ExperimentSpec load_config(const std::filesystem::path& path);

/// Config text that parses back to an identical spec.
std::string echo_config(const ExperimentSpec& spec);

std::string_view to_string(IntensityKind kind);
IntensityKind parse_intensity_kind(std::string_view name);

}  // namespace mempoolsim
