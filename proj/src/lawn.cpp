#include "grasshopper/lawn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "grasshopper/errors.hpp"
#include "grasshopper/rng.hpp"

namespace grasshopper {

std::string_view to_string(Setup setup) { return setup == Setup::One ? "one" : "two"; }

Setup setup_from_string(std::string_view name) {
  if (name == "one") return Setup::One;
  if (name == "two") return Setup::Two;
  throw InputError("setup must be 'one' or 'two', got '" + std::string(name) + "'");
}

Lawn::Lawn(SiteBitsTag, GridPtr grid, std::vector<std::uint8_t> sites) : grid_(std::move(grid)), sites_(std::move(sites)) {}

Lawn::Lawn(GridPtr grid, std::span<const std::uint8_t> pair_bits) : grid_(std::move(grid)) {
  if (!grid_) throw InputError("null grid");
  if (pair_bits.size() != grid_->pair_count()) {
    throw InputError("expected " + std::to_string(grid_->pair_count()) + " pair bits, got " +
                     std::to_string(pair_bits.size()));
  }
  sites_.assign(grid_->size(), 0);
  for (std::size_t k = 0; k < pair_bits.size(); ++k) {
    const std::size_t rep = grid_->pair_representative(k);
    const std::uint8_t bit = pair_bits[k] ? 1 : 0;
    sites_[rep] = bit;
    sites_[grid_->antipode(rep)] = static_cast<std::uint8_t>(1 - bit);
  }
}

Lawn Lawn::from_site_bits(GridPtr grid, std::span<const std::uint8_t> site_bits) {
  if (!grid) throw InputError("null grid");
  if (site_bits.size() != grid->size()) {
    throw InputError("expected " + std::to_string(grid->size()) + " site bits, got " +
                     std::to_string(site_bits.size()));
  }
  std::vector<std::uint8_t> sites(site_bits.begin(), site_bits.end());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] > 1 || sites[i] + sites[grid->antipode(i)] != 1) {
      throw InputError("lawn violates the antipodal condition at site " + std::to_string(i));
    }
  }
  return Lawn(SiteBitsTag{}, std::move(grid), std::move(sites));
}

std::size_t Lawn::count() const {
  std::size_t total = 0;
  for (std::uint8_t b : sites_) total += b;
  return total;
}

void Lawn::toggle_pair(std::size_t site) {
  if (site >= sites_.size()) throw InputError("site index " + std::to_string(site) + " out of range");
  const std::size_t partner = grid_->antipode(site);
  sites_[site] ^= 1;
  sites_[partner] ^= 1;
}

TwoLawnConfig::TwoLawnConfig(Lawn a, Lawn b) : first(std::move(a)), second(std::move(b)) {
  if (first.grid().content_hash() != second.grid().content_hash()) {
    throw GridMismatch("two-lawn config: lawns live on different grids");
  }
}

Setup setup_of(const LawnState& state) {
  return std::holds_alternative<Lawn>(state) ? Setup::One : Setup::Two;
}

const SphericalGrid& grid_of(const LawnState& state) {
  return std::visit(
      [](const auto& s) -> const SphericalGrid& {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Lawn>) {
          return s.grid();
        } else {
          return s.first.grid();
        }
      },
      state);
}

Lawn hemisphere_lawn(GridPtr grid, const Vec3& axis) {
  std::vector<std::uint8_t> bits(grid->pair_count());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    bits[k] = dot(grid->point(grid->pair_representative(k)), axis) >= 0.0 ? 1 : 0;
  }
  return Lawn(std::move(grid), bits);
}

Lawn cogwheel_lawn(GridPtr grid, int n_cogs, double cog_fraction, double phase) {
  if (n_cogs <= 0 || n_cogs % 2 == 0) {
    throw InputError("cogwheel needs an odd positive number of cogs, got " + std::to_string(n_cogs));
  }
  if (!(cog_fraction >= 0.0 && cog_fraction <= 1.0)) throw InputError("cog_fraction must lie in [0, 1]");
  const double depth = cog_fraction * std::numbers::pi / n_cogs;
  std::vector<std::uint8_t> bits(grid->pair_count());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    const Vec3& p = grid->point(grid->pair_representative(k));
    const double lon = std::atan2(p.y, p.x);
    const double shift = std::cos(n_cogs * (lon - phase)) >= 0.0 ? depth : -depth;
    // colatitude < pi/2 + shift  <=>  z > -sin(shift); ties resolve onto the representative.
    bits[k] = p.z >= -std::sin(shift) ? 1 : 0;
  }
  return Lawn(std::move(grid), bits);
}

Lawn random_lawn(GridPtr grid, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<std::uint8_t> bits(grid->pair_count());
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  return Lawn(std::move(grid), bits);
}

Lawn complement(const Lawn& lawn) {
  std::vector<std::uint8_t> bits(lawn.grid().pair_count());
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = static_cast<std::uint8_t>(1 - lawn.pair_bit(k));
  return Lawn(lawn.grid_ptr(), bits);
}

namespace {

void require_same_grid(const SphericalGrid& grid, const InteractionTable& table) {
  if (&grid != &table.grid() && grid.content_hash() != table.grid().content_hash()) {
    throw GridMismatch("lawn and interaction table were built for different grids");
  }
}

// sum_j w_ij * bits[j] over the stored row of i; also reports w_i,partner.
struct RowSums {
  double weighted = 0.0;
  double total = 0.0;
  double partner = 0.0;
};

RowSums row_sums(const InteractionTable& table, std::size_t i, std::size_t partner,
                 std::span<const std::uint8_t> bits) {
  RowSums r;
  for (const Neighbor& nb : table.neighbors(i)) {
    r.weighted += nb.weight * bits[nb.site];
    r.total += nb.weight;
    if (nb.site == partner) r.partner = nb.weight;
  }
  return r;
}

}  // namespace

double success_probability_one(const Lawn& lawn, const InteractionTable& table) {
  require_same_grid(lawn.grid(), table);
  const auto s = lawn.site_bits();
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i]) continue;
    double row = 0.0;
    for (const Neighbor& nb : table.neighbors(i)) row += nb.weight * s[nb.site];
    sum += row;
  }
  return table.prefactor() * sum;
}

double success_probability_two(const TwoLawnConfig& config, const InteractionTable& table) {
  require_same_grid(config.first.grid(), table);
  const auto s1 = config.first.site_bits();
  const auto s2 = config.second.site_bits();
  double sum = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (!s1[i]) continue;
    double row = 0.0;
    for (const Neighbor& nb : table.neighbors(i)) row += nb.weight * (1 - s2[nb.site]);
    sum += row;
  }
  return table.prefactor() * sum;
}

double success_probability(const LawnState& state, const InteractionTable& table) {
  if (const auto* lawn = std::get_if<Lawn>(&state)) return success_probability_one(*lawn, table);
  return success_probability_two(std::get<TwoLawnConfig>(state), table);
}

double delta_pair_toggle(const LawnState& state, const InteractionTable& table, int which_lawn, std::size_t site) {
  const SphericalGrid& grid = grid_of(state);
  require_same_grid(grid, table);
  if (site >= grid.size()) throw InputError("site index " + std::to_string(site) + " out of range");
  const std::size_t partner = grid.antipode(site);

  if (const auto* lawn = std::get_if<Lawn>(&state)) {
    if (which_lawn != 1) throw InputError("one-lawn state has only lawn 1");
    const auto s = lawn->site_bits();
    const RowSums fi = row_sums(table, site, partner, s);
    const RowSums fa = row_sums(table, partner, site, s);
    const double d = 1.0 - 2.0 * s[site];
    // 2 sum_k d_k f_k + sum_kl d_k d_l w_kl with d_partner = -d and no self pairs.
    return table.prefactor() * (2.0 * d * (fi.weighted - fa.weighted) - 2.0 * fi.partner);
  }

  const auto& config = std::get<TwoLawnConfig>(state);
  const auto s1 = config.first.site_bits();
  const auto s2 = config.second.site_bits();
  if (which_lawn == 1) {
    const RowSums gi = row_sums(table, site, partner, s2);
    const RowSums ga = row_sums(table, partner, site, s2);
    const double d = 1.0 - 2.0 * s1[site];
    return table.prefactor() * d * ((gi.total - gi.weighted) - (ga.total - ga.weighted));
  }
  if (which_lawn == 2) {
    const RowSums fi = row_sums(table, site, partner, s1);
    const RowSums fa = row_sums(table, partner, site, s1);
    const double d = 1.0 - 2.0 * s2[site];
    return -table.prefactor() * d * (fi.weighted - fa.weighted);
  }
  throw InputError("which_lawn must be 1 or 2");
}

void apply_pair_toggle(LawnState& state, int which_lawn, std::size_t site) {
  if (auto* lawn = std::get_if<Lawn>(&state)) {
    if (which_lawn != 1) throw InputError("one-lawn state has only lawn 1");
    lawn->toggle_pair(site);
    return;
  }
  auto& config = std::get<TwoLawnConfig>(state);
  if (which_lawn == 1) {
    config.first.toggle_pair(site);
  } else if (which_lawn == 2) {
    config.second.toggle_pair(site);
  } else {
    throw InputError("which_lawn must be 1 or 2");
  }
}

}  // namespace grasshopper
