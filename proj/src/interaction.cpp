#include "grasshopper/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "grasshopper/errors.hpp"
#include "grasshopper/parallel.hpp"

namespace grasshopper {

std::string_view to_string(KernelShape shape) {
  switch (shape) {
    case KernelShape::Cosine: return "cosine";
    case KernelShape::Hat: return "hat";
  }
  return "unknown";
}

KernelShape kernel_shape_from_string(std::string_view name) {
  if (name == "cosine") return KernelShape::Cosine;
  if (name == "hat") return KernelShape::Hat;
  throw InputError("unknown kernel shape '" + std::string(name) + "'");
}

double DeltaKernel::operator()(double x) const {
  const double ax = std::abs(x);
  if (ax >= half_width) return 0.0;
  switch (shape) {
    case KernelShape::Cosine: return (1.0 + std::cos(std::numbers::pi * x / half_width)) / (2.0 * half_width);
    case KernelShape::Hat: return (1.0 - ax / half_width) / half_width;
  }
  return 0.0;
}

double phi(double x) { return DeltaKernel{}(x); }

double min_jump_angle(const SphericalGrid& grid, const DeltaKernel& kernel) {
  return std::max(2.0 * kernel.half_width * grid.spacing(), 0.01);
}

InteractionTable::InteractionTable(GridPtr grid, double theta, DeltaKernel kernel, std::vector<std::size_t> offsets,
                                   std::vector<Neighbor> entries)
    : grid_(std::move(grid)),
      theta_(theta),
      kernel_(kernel),
      offsets_(std::move(offsets)),
      entries_(std::move(entries)) {
  const double n = static_cast<double>(grid_->size());
  prefactor_ = 4.0 / (std::sin(theta_) * n * n * grid_->spacing());
}

double InteractionTable::total_weight() const {
  double sum = 0.0;
  for (const Neighbor& e : entries_) sum += e.weight;
  return sum;
}

namespace {

void check_admissible(const SphericalGrid& grid, double theta, const DeltaKernel& kernel) {
  if (!(kernel.half_width > 0.0)) throw InputError("kernel half-width must be positive");
  const double lo = min_jump_angle(grid, kernel);
  if (!(theta >= lo && theta <= std::numbers::pi - lo)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "jump angle unresolved by grid: theta = " << theta << " outside [" << lo << ", "
        << std::numbers::pi - lo << "] for N = " << grid.size();
    throw AngleUnresolved(msg.str());
  }
}

}  // namespace

InteractionTable build_interaction(GridPtr grid, double theta, const DeltaKernel& kernel, NeighborSearch search,
                                   unsigned threads) {
  if (!grid) throw InputError("null grid");
  check_admissible(*grid, theta, kernel);

  const std::size_t n = grid->size();
  const double h = grid->spacing();
  const double reach = kernel.half_width * h;
  // Dot-product prefilter, padded so the exact angle test below is the only cut.
  const double dot_lo = std::cos(std::min(std::numbers::pi, theta + reach)) - 1e-9;
  const double dot_hi = std::cos(std::max(0.0, theta - reach)) + 1e-9;

  std::vector<std::vector<Neighbor>> rows(n);
  auto consider = [&](std::size_t i, std::size_t j, std::vector<Neighbor>& row) {
    if (i == j) return;
    const Vec3& pi = grid->point(i);
    const Vec3& pj = grid->point(j);
    const double angle = geodesic_angle(pi, pj);
    const double offset = angle - theta;
    if (std::abs(offset) >= reach) return;
    const double w = kernel(offset / h);
    if (w > 0.0) row.push_back({static_cast<std::uint32_t>(j), w});
  };

  if (search == NeighborSearch::BruteForce) {
    parallel_for(n, threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < n; ++j) consider(i, j, rows[i]);
    });
  } else {
    const LatitudeBins bins(*grid, h);
    const auto sites = bins.band_sites();
    parallel_for(n, threads, [&](std::size_t i) {
      const Vec3& pi = grid->point(i);
      const auto [first, last] = bins.candidate_range(pi, theta + reach);
      auto& row = rows[i];
      for (std::size_t k = first; k < last; ++k) {
        const std::size_t j = sites[k];
        const double d = dot(pi, grid->point(j));
        if (d < dot_lo || d > dot_hi) continue;
        consider(i, j, row);
      }
      std::sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) { return a.site < b.site; });
    });
  }

  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + rows[i].size();
  std::vector<Neighbor> entries;
  entries.reserve(offsets[n]);
  for (auto& row : rows) {
    entries.insert(entries.end(), row.begin(), row.end());
    std::vector<Neighbor>().swap(row);
  }
  return InteractionTable(std::move(grid), theta, kernel, std::move(offsets), std::move(entries));
}

namespace {

constexpr char kCacheMagic[8] = {'G', 'H', 'T', 'A', 'B', 'L', 'E', '\0'};
constexpr std::uint32_t kCacheVersion = 1;

struct CacheHeader {
  char magic[8];
  std::uint32_t version;
  std::uint32_t shape;
  double theta;
  double half_width;
  char grid_hash[16];
  std::uint64_t sites;
  std::uint64_t entries;
};

CacheHeader make_header(const SphericalGrid& grid, double theta, const DeltaKernel& kernel) {
  CacheHeader h{};
  std::memcpy(h.magic, kCacheMagic, sizeof(h.magic));
  h.version = kCacheVersion;
  h.shape = static_cast<std::uint32_t>(kernel.shape);
  h.theta = theta;
  h.half_width = kernel.half_width;
  std::memcpy(h.grid_hash, grid.content_hash().data(), std::min<std::size_t>(16, grid.content_hash().size()));
  h.sites = grid.size();
  return h;
}

bool same_key(const CacheHeader& a, const CacheHeader& b) {
  return std::memcmp(a.magic, b.magic, sizeof(a.magic)) == 0 && a.version == b.version && a.shape == b.shape &&
         a.theta == b.theta && a.half_width == b.half_width &&
         std::memcmp(a.grid_hash, b.grid_hash, sizeof(a.grid_hash)) == 0 && a.sites == b.sites;
}

}  // namespace

void save_table(const InteractionTable& table, const std::filesystem::path& path) {
  CacheHeader header = make_header(table.grid(), table.theta(), table.kernel());
  header.entries = table.entry_count();
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write table cache " + tmp);
    out.write(reinterpret_cast<const char*>(&header), sizeof(header));
    const auto offsets = table.offsets();
    out.write(reinterpret_cast<const char*>(offsets.data()),
              static_cast<std::streamsize>(offsets.size_bytes()));
    const auto entries = table.entries();
    out.write(reinterpret_cast<const char*>(entries.data()),
              static_cast<std::streamsize>(entries.size_bytes()));
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

bool load_table(const GridPtr& grid, double theta, const DeltaKernel& kernel, const std::filesystem::path& path,
                std::vector<std::size_t>& offsets, std::vector<Neighbor>& entries) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  CacheHeader stored{};
  if (!in.read(reinterpret_cast<char*>(&stored), sizeof(stored))) return false;
  if (!same_key(stored, make_header(*grid, theta, kernel))) return false;
  offsets.resize(stored.sites + 1);
  entries.resize(stored.entries);
  in.read(reinterpret_cast<char*>(offsets.data()), static_cast<std::streamsize>(offsets.size() * sizeof(std::size_t)));
  in.read(reinterpret_cast<char*>(entries.data()), static_cast<std::streamsize>(entries.size() * sizeof(Neighbor)));
  return static_cast<bool>(in) && offsets.back() == entries.size();
}

InteractionTable cached_interaction(GridPtr grid, double theta, const DeltaKernel& kernel,
                                    const std::filesystem::path& cache_dir, unsigned threads) {
  char name[160];
  std::snprintf(name, sizeof(name), "%s_%s_w%.17g_t%.17g.bin", grid->content_hash().c_str(),
                std::string(to_string(kernel.shape)).c_str(), kernel.half_width, theta);
  const auto path = cache_dir / name;
  std::vector<std::size_t> offsets;
  std::vector<Neighbor> entries;
  if (load_table(grid, theta, kernel, path, offsets, entries)) {
    check_admissible(*grid, theta, kernel);
    return InteractionTable(std::move(grid), theta, kernel, std::move(offsets), std::move(entries));
  }
  InteractionTable table = build_interaction(std::move(grid), theta, kernel, NeighborSearch::LatitudeBands, threads);
  std::filesystem::create_directories(cache_dir);
  save_table(table, path);
  return table;
}

}  // namespace grasshopper
