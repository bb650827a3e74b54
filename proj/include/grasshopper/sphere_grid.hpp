#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grasshopper/vec3.hpp"

namespace grasshopper {

inline constexpr double kAntipodalTolerance = 1e-9;
inline constexpr double kUnitNormTolerance = 1e-6;

/// Spherical angle between two unit vectors, in [0, pi].
///
/// Evaluated as 2*atan2(|u-v|, |u+v|), which equals 2*asin(|u-v|/2) on the
/// unit sphere but stays well conditioned near 0 and near pi.
double geodesic_angle(const Vec3& u, const Vec3& v);

/// An immutable antipodal point set on the unit sphere.
///
/// Every point i has a partner antipode(i) with point(antipode(i)) == -point(i)
/// to within kAntipodalTolerance. Pairs are indexed 0..N/2-1; the representative
/// of a pair is the member with the lexicographically larger coordinate triple.
class SphericalGrid {
 public:
  /// Validates and pairs the given points. Points must already be unit length
  /// to within kUnitNormTolerance; they are renormalized.
  /// Throws InputError or GridNotAntipodal.
  SphericalGrid(std::vector<Vec3> points, std::string source_tag);

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t pair_count() const noexcept { return pair_rep_.size(); }
  std::span<const Vec3> points() const noexcept { return points_; }
  const Vec3& point(std::size_t i) const { return points_[i]; }
  std::size_t antipode(std::size_t i) const { return antipode_[i]; }
  std::size_t pair_of(std::size_t i) const { return pair_of_[i]; }
  std::size_t pair_representative(std::size_t pair) const { return pair_rep_[pair]; }
  bool is_representative(std::size_t i) const { return pair_rep_[pair_of_[i]] == i; }

  /// Mean lattice spacing h = sqrt(4 pi / N), radians.
  double spacing() const noexcept { return spacing_; }
  const std::string& source_tag() const noexcept { return source_tag_; }
  /// FNV-1a over the coordinate bytes, as 16 hex digits.
  const std::string& content_hash() const noexcept { return content_hash_; }

 private:
  std::vector<Vec3> points_;
  std::vector<std::uint32_t> antipode_;
  std::vector<std::uint32_t> pair_of_;
  std::vector<std::uint32_t> pair_rep_;
  double spacing_ = 0.0;
  std::string source_tag_;
  std::string content_hash_;
};

using GridPtr = std::shared_ptr<const SphericalGrid>;

/// Reads a grid file: one point per line as whitespace separated x y z,
/// '#' starts a comment, blank lines are skipped.
SphericalGrid load_grid(const std::filesystem::path& path, std::string source_tag = "file");

/// Parses grid text. Exposed for in-memory use and tests.
SphericalGrid parse_grid(std::string_view text, std::string source_tag = "file");

/// Writes the grid in the text format with round-trip precision.
void save_grid(const SphericalGrid& grid, const std::filesystem::path& path);
std::string format_grid(const SphericalGrid& grid);

/// Fibonacci lattice on the open upper hemisphere plus antipodes, N = 2*n_pairs.
/// Points are interleaved: 2k is the k-th upper point and 2k+1 its antipode.
SphericalGrid generate_fibonacci_antipodal(std::size_t n_pairs);

/// Latitude-band index for angular range queries over a grid.
///
/// Sites are bucketed by colatitude into bands of the given height. A query
/// visits every site whose angular distance from the center could lie within
/// max_angle; callers apply their own exact filter.
class LatitudeBins {
 public:
  LatitudeBins(const SphericalGrid& grid, double band_height);

  /// Candidate index range [first, last) into band_sites(); includes the
  /// center site itself when it belongs to the grid.
  std::pair<std::size_t, std::size_t> candidate_range(const Vec3& center, double max_angle) const;
  std::span<const std::uint32_t> band_sites() const noexcept { return sites_; }

 private:
  double band_height_;
  std::size_t band_count_;
  std::vector<std::uint32_t> sites_;         // sorted by band
  std::vector<std::size_t> band_offsets_;  // band_count_ + 1 entries
};

}  // namespace grasshopper
