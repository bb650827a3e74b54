#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grasshopper/sphere_grid.hpp"

namespace grasshopper {

enum class KernelShape { Cosine, Hat };

std::string_view to_string(KernelShape shape);
KernelShape kernel_shape_from_string(std::string_view name);

/// Nonnegative, even, unit-integral approximation of the Dirac delta,
/// supported on |x| < half_width (x measured in lattice spacings).
///
///   Cosine: (1 + cos(pi x / w)) / (2w)
///   Hat:    (1 - |x| / w) / w
///
/// The default (Cosine, w = 2) is the Peskin cosine bump (1 + cos(pi x / 2)) / 4.
struct DeltaKernel {
  KernelShape shape = KernelShape::Cosine;
  double half_width = 2.0;

  double operator()(double x) const;
  bool operator==(const DeltaKernel&) const = default;
};

/// Default kernel evaluated at x.
double phi(double x);

struct Neighbor {
  std::uint32_t site;
  double weight;
};

/// Smallest admissible jump angle for a grid and kernel: max(2 w h, 0.01).
double min_jump_angle(const SphericalGrid& grid, const DeltaKernel& kernel);

/// Sparse, immutable pair-weight table for one jump angle.
///
/// neighbors(i) lists every j with |theta_ij - theta| < w h, sorted by j, with
/// weight phi((theta_ij - theta) / h) > 0. The table is symmetric.
class InteractionTable {
 public:
  InteractionTable(GridPtr grid, double theta, DeltaKernel kernel, std::vector<std::size_t> offsets,
                   std::vector<Neighbor> entries);

  const SphericalGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  double theta() const noexcept { return theta_; }
  const DeltaKernel& kernel() const noexcept { return kernel_; }
  /// 4 / (sin(theta) N^2 h).
  double prefactor() const noexcept { return prefactor_; }

  std::span<const Neighbor> neighbors(std::size_t i) const {
    return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t entry_count() const noexcept { return entries_.size(); }
  /// Sum of all stored weights (ordered pairs).
  double total_weight() const;

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const Neighbor> entries() const noexcept { return entries_; }

 private:
  GridPtr grid_;
  double theta_;
  DeltaKernel kernel_;
  double prefactor_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> entries_;
};

enum class NeighborSearch { LatitudeBands, BruteForce };

/// Precomputes the weight table for jump angle theta.
/// Throws AngleUnresolved when theta is outside [min_jump_angle, pi - min_jump_angle].
InteractionTable build_interaction(GridPtr grid, double theta, const DeltaKernel& kernel = {},
                                   NeighborSearch search = NeighborSearch::LatitudeBands,
                                   unsigned threads = 1);

/// Versioned binary cache. load returns false when the file is absent or was
/// built for a different (grid hash, theta, kernel).
void save_table(const InteractionTable& table, const std::filesystem::path& path);
bool load_table(const GridPtr& grid, double theta, const DeltaKernel& kernel, const std::filesystem::path& path,
                std::vector<std::size_t>& offsets, std::vector<Neighbor>& entries);

/// build_interaction backed by an on-disk cache directory.
InteractionTable cached_interaction(GridPtr grid, double theta, const DeltaKernel& kernel,
                                    const std::filesystem::path& cache_dir, unsigned threads = 1);

}  // namespace grasshopper
