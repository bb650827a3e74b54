#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grasshopper/annealer.hpp"
#include "grasshopper/interaction.hpp"
#include "grasshopper/lawn.hpp"

namespace grasshopper {

/// Quantum singlet anticorrelation probability cos^2(theta/2).
double quantum_probability(double theta);

/// Success probability of a hemispherical lawn, 1 - theta/pi.
double hemisphere_probability(double theta);

/// Angle maximizing cos^2(theta/2) - (1 - theta/pi): asin(2/pi).
double gap_maximizer_landmark();

/// Documented regime landmarks (fractions of pi), observed rather than derived.
inline constexpr double kCogwheelRegimeEnd = 0.41;
inline constexpr double kStripeRegimeStart = 0.57;
inline constexpr double kTwoLawnCogwheelReturn = 0.59;

struct SpecialAngle {
  int q;
  double theta;
  bool one_lawn_hemisphere_optimal;
  bool two_lawn_hemisphere_optimal;
};

/// theta_q = pi/q for q = 2..q_max. Hemispheres are optimal for every q in the
/// one-lawn setup and for even q in the two-lawn setup.
std::vector<SpecialAngle> special_angles(int q_max);

/// Nearest odd integer to mode * 2pi/theta (one lawn) or mode * pi/theta
/// (two lawns); ties go up.
int predicted_cogs(double theta, Setup setup, int mode = 1);

struct CogCount {
  int n_cogs = 0;
  double confidence = 0.0;
};

/// Power fraction at or above which a lawn counts as a cogwheel.
inline constexpr double kCogConfidenceThreshold = 0.5;

/// Counts boundary lobes. The lawn's symmetry axis is its first moment;
/// boundary sites are those with both colors within 2h; the azimuthal Fourier
/// spectrum of the boundary's height above the equator of that axis is scanned
/// for the dominant odd harmonic. Returns {0, 0} when there is no axis or the
/// modulation is below the noise floor.
CogCount count_cogs(const Lawn& lawn);

struct ReflectionReport {
  double theta = 0.0;
  double probability = 0.0;            // P_two({L1, L2}, theta)
  double reflected_probability = 0.0;  // P_two({L1, complement(L2)}, pi - theta)
  double difference = 0.0;
};

/// Both sides of the two-lawn reflection identity.
ReflectionReport verify_reflection_symmetry(const TwoLawnConfig& config, const InteractionTable& table,
                                            const InteractionTable& reflected_table);
ReflectionReport verify_reflection_symmetry(const TwoLawnConfig& config, double theta,
                                            const DeltaKernel& kernel = {});

/// Named initializer for one theta: "random", "hemisphere" (axis z) or
/// "cogwheel" (predicted cog number, cog_fraction 0.5). Two-lawn cogwheels are
/// offset by half a cog; above pi/2 the second lawn is complemented.
LawnState make_initializer(const GridPtr& grid, double theta, Setup setup, std::string_view name, std::uint64_t seed);

/// Initializers used for one theta: random, hemisphere, and a cogwheel with the
/// predicted cog number (two-lawn cogwheels are offset by half a cog).
std::vector<LawnState> default_initializers(const GridPtr& grid, double theta, Setup setup, std::uint64_t seed);

struct CurveRow {
  double theta = 0.0;
  std::optional<double> p_one;
  std::optional<double> p_two;
  double q = 0.0;
  double hemisphere = 0.0;
  std::optional<double> gap_one;
  std::optional<double> gap_two;
  int n_cogs_one = 0;
  int n_cogs_two = 0;
  std::uint64_t seed = 0;
};

struct ProbabilityCurve {
  std::vector<CurveRow> rows;
};

struct SweepOptions {
  DeltaKernel kernel;
  bool run_one = true;
  bool run_two = true;
  int n_replicas = 3;
  /// Initializer names, see make_initializer.
  std::vector<std::string> initializers{"random", "hemisphere", "cogwheel"};
  ScheduleChoice schedule = AutoSchedule{};
  std::uint64_t base_seed = 1;
  unsigned threads = 1;
  /// Directory for per-row best lawns and the row checkpoint; empty disables both.
  std::filesystem::path output_dir;
  /// Stop after this many newly completed rows (simulates an interrupt).
  std::optional<std::size_t> stop_after_rows;
};

/// Default theta grid: 64 points on [0.05 pi, 0.95 pi] plus pi/q for q = 2..10,
/// sorted and deduplicated.
std::vector<double> default_sweep_thetas();

/// Seed used for row `index` of a sweep.
std::uint64_t row_seed(std::uint64_t base_seed, std::size_t index);

/// Fills one curve row per theta (sorted ascending) by replica search. With an
/// output directory, completed rows are checkpointed and skipped on rerun.
ProbabilityCurve sweep(const GridPtr& grid, std::vector<double> thetas, const SweepOptions& options);

}  // namespace grasshopper
