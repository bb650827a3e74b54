#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "grasshopper/interaction.hpp"
#include "grasshopper/sphere_grid.hpp"

namespace grasshopper {

enum class Setup { One, Two };

std::string_view to_string(Setup setup);
Setup setup_from_string(std::string_view name);

/// Antipodal binary coloring of a grid: exactly one site of each antipodal
/// pair is on the lawn, so the lawn always holds N/2 sites.
///
/// The only mutation is a pair toggle, which swaps the colors of a site and
/// its antipode; the antipodal constraint cannot be violated through this API.
class Lawn {
 public:
  /// pair_bits[k] == 1 puts the representative of pair k on the lawn.
  Lawn(GridPtr grid, std::span<const std::uint8_t> pair_bits);

  /// From a full per-site bit vector. Throws InputError if it is not antipodal.
  static Lawn from_site_bits(GridPtr grid, std::span<const std::uint8_t> site_bits);

  const SphericalGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return sites_.size(); }

  std::uint8_t operator[](std::size_t site) const { return sites_[site]; }
  std::span<const std::uint8_t> site_bits() const noexcept { return sites_; }
  std::uint8_t pair_bit(std::size_t pair) const { return sites_[grid_->pair_representative(pair)]; }
  std::size_t count() const;

  /// Swaps the bits of `site` and its antipode.
  void toggle_pair(std::size_t site);

  friend bool operator==(const Lawn& a, const Lawn& b) {
    return a.grid_->content_hash() == b.grid_->content_hash() && a.sites_ == b.sites_;
  }

 private:
  struct SiteBitsTag {};
  Lawn(SiteBitsTag, GridPtr grid, std::vector<std::uint8_t> sites);

  GridPtr grid_;
  std::vector<std::uint8_t> sites_;
};

/// Two independent antipodal lawns on the same grid. The grasshopper jumps
/// from `first` and succeeds by landing outside `second`.
struct TwoLawnConfig {
  Lawn first;
  Lawn second;

  TwoLawnConfig(Lawn a, Lawn b);
  friend bool operator==(const TwoLawnConfig&, const TwoLawnConfig&) = default;
};

using LawnState = std::variant<Lawn, TwoLawnConfig>;

Setup setup_of(const LawnState& state);
const SphericalGrid& grid_of(const LawnState& state);

/// Sites with positive projection on `axis`. Sites exactly on the boundary
/// great circle go on the lawn iff they are their pair's representative.
Lawn hemisphere_lawn(GridPtr grid, const Vec3& axis);

/// Cogwheel about the z axis: site i is on the lawn iff its colatitude is
/// below pi/2 + A(lon), where A = depth * sign(cos(n_cogs (lon - phase))) and
/// depth = cog_fraction * pi / n_cogs. n_cogs must be odd, which makes the
/// boundary antipodally consistent. Decided on representatives only.
Lawn cogwheel_lawn(GridPtr grid, int n_cogs, double cog_fraction, double phase = 0.0);

/// Each pair's lawn member chosen by a fair coin from a seeded stream.
Lawn random_lawn(GridPtr grid, std::uint64_t seed);

Lawn complement(const Lawn& lawn);

/// One-lawn success probability, prefactor * sum over ordered pairs of s_i s_j w_ij.
double success_probability_one(const Lawn& lawn, const InteractionTable& table);

/// Two-lawn success probability, prefactor * sum of s1_i (1 - s2_j) w_ij.
double success_probability_two(const TwoLawnConfig& config, const InteractionTable& table);

double success_probability(const LawnState& state, const InteractionTable& table);

/// P(after) - P(before) for toggling the pair containing `site` in lawn
/// `which_lawn` (1 or 2). Reads only the neighbor rows of the two pair sites.
double delta_pair_toggle(const LawnState& state, const InteractionTable& table, int which_lawn, std::size_t site);

void apply_pair_toggle(LawnState& state, int which_lawn, std::size_t site);

}  // namespace grasshopper
