#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grasshopper/analysis.hpp"
#include "grasshopper/annealer.hpp"
#include "grasshopper/interaction.hpp"
#include "json.hpp"

namespace grasshopper::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitInvalid = 2;

struct GridSource {
  std::optional<std::filesystem::path> path;
  std::optional<std::size_t> fibonacci_pairs;
};

/// Setups a command runs: optimize uses exactly one, sweep may use both.
enum class SetupChoice { One, Two, Both };

/// Effective configuration of an optimize or sweep run. Values come from the
/// JSON config file first and are then overridden by command-line flags.
struct RunConfig {
  GridSource grid;
  SetupChoice setup = SetupChoice::One;
  std::vector<double> thetas;  // radians
  DeltaKernel kernel;
  ScheduleChoice schedule = AutoSchedule{};
  int n_replicas = 3;
  std::vector<std::string> initializers{"random", "hemisphere", "cogwheel"};
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "out";
  unsigned threads = 0;
  std::filesystem::path table_cache;  // empty: no cache
  int checkpoint_every = 0;           // optimize: levels between replica checkpoints, 0 = off
};

/// Reads the keys of a config file into `config`. Throws ParseError/InputError.
void apply_config_json(const nlohmann::json& j, RunConfig& config);
nlohmann::ordered_json config_to_json(const RunConfig& config);

/// Checks invariants: a grid source, at least one theta, a seed, valid schedule.
void validate(const RunConfig& config);

GridPtr make_grid(const GridSource& source);

/// Entry point; args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grasshopper::cli
