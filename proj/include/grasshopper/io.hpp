#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "grasshopper/analysis.hpp"
#include "grasshopper/annealer.hpp"
#include "grasshopper/lawn.hpp"

namespace grasshopper {

using ordered_json = nlohmann::ordered_json;

/// Run-length encoding of a 0/1 site vector: comma separated "<bit>*<count>"
/// runs in site order, e.g. "1*3,0*2" for 11100.
std::string encode_rle(std::span<const std::uint8_t> bits);
/// Throws ParseError on malformed input or when the decoded length differs
/// from `expected_size`.
std::vector<std::uint8_t> decode_rle(std::string_view text, std::size_t expected_size);

/// Contents of a lawn file.
struct LawnRecord {
  std::string source_tag;
  std::size_t n = 0;
  std::string content_hash;
  double theta = 0.0;
  Setup setup = Setup::One;
  DeltaKernel kernel;
  std::vector<std::vector<std::uint8_t>> lawns;  // one or two site-bit vectors
  double probability = 0.0;
  std::optional<std::uint64_t> seed;
};

LawnRecord make_lawn_record(const LawnState& state, double theta, const DeltaKernel& kernel, double probability,
                            std::optional<std::uint64_t> seed = std::nullopt);

/// {format, version, grid: {source_tag, N, content_hash}, theta, setup, kernel,
///  bits: [rle...], probability, seed?}
ordered_json lawn_to_json(const LawnRecord& record);
LawnRecord lawn_from_json(const nlohmann::json& j);

void write_lawn_file(const std::filesystem::path& path, const LawnRecord& record);
LawnRecord read_lawn_file(const std::filesystem::path& path);

/// Rebuilds the state on `grid`. Throws GridMismatch if the record was saved
/// for a different grid.
LawnState state_from_record(const LawnRecord& record, const GridPtr& grid);

/// Sweep CSV: header theta,p_one,p_two,q,hemisphere,gap_one,gap_two,
/// n_cogs_one,n_cogs_two,seed; reals with 12 significant digits, "nan" for
/// setups that were not run.
std::string format_curve_csv(const ProbabilityCurve& curve);
ProbabilityCurve parse_curve_csv(std::string_view text);

/// Locale-independent shortest form with the given significant digits.
std::string format_real(double value, int significant_digits = 12);

ordered_json curve_row_to_json(const CurveRow& row);
CurveRow curve_row_from_json(const nlohmann::json& j);

/// Annealing checkpoint: schedule, position, RNG counter, current and best states.
ordered_json checkpoint_to_json(const AnnealCheckpoint& checkpoint);
AnnealCheckpoint checkpoint_from_json(const nlohmann::json& j, const GridPtr& grid);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace grasshopper
