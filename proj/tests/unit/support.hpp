#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "grasshopper/interaction.hpp"
#include "grasshopper/lawn.hpp"
#include "grasshopper/sphere_grid.hpp"

namespace testing {

using namespace grasshopper;

inline GridPtr fibonacci(std::size_t pairs) {
  return std::make_shared<const SphericalGrid>(generate_fibonacci_antipodal(pairs));
}

inline GridPtr octahedron() {
  return std::make_shared<const SphericalGrid>(
      parse_grid("1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n", "octahedron"));
}

// Scratch directory, wiped on creation.
inline std::filesystem::path scratch(const std::string& name) {
  const char* base = std::getenv("GRASSHOPPER_TEST_TMP");
  const auto root = base ? std::filesystem::path(base) : std::filesystem::temp_directory_path() / "grasshopper_tests";
  const auto dir = root / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Oracles: direct O(N^2) sums, independent of the interaction table.
namespace oracle {

inline double angle(const Vec3& u, const Vec3& v) {
  return std::acos(std::clamp(u.x * v.x + u.y * v.y + u.z * v.z, -1.0, 1.0));
}

inline double prefactor(const SphericalGrid& g, double theta) {
  const double n = static_cast<double>(g.size());
  return 4.0 / (std::sin(theta) * n * n * g.spacing());
}

template <typename Summand>
double double_sum(const SphericalGrid& g, double theta, const DeltaKernel& k, Summand s) {
  const double h = g.spacing();
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double c = s(i, j);
      if (c == 0.0) continue;
      total += c * k((angle(g.point(i), g.point(j)) - theta) / h);
    }
  }
  return prefactor(g, theta) * total;
}

inline double p_one(const Lawn& lawn, double theta, const DeltaKernel& k = {}) {
  return double_sum(lawn.grid(), theta, k, [&](std::size_t i, std::size_t j) { return double(lawn[i] * lawn[j]); });
}

inline double p_two(const TwoLawnConfig& c, double theta, const DeltaKernel& k = {}) {
  return double_sum(c.first.grid(), theta, k,
                    [&](std::size_t i, std::size_t j) { return double(c.first[i] * (1 - c.second[j])); });
}

// All (i, j, w) with |theta_ij - theta| < w h, by direct scan with the library angle.
inline std::vector<std::vector<Neighbor>> neighbor_scan(const SphericalGrid& g, double theta, const DeltaKernel& k) {
  std::vector<std::vector<Neighbor>> rows(g.size());
  const double h = g.spacing();
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = (geodesic_angle(g.point(i), g.point(j)) - theta) / h;
      if (std::abs(x) >= k.half_width) continue;
      const double w = k(x);
      if (w > 0.0) rows[i].push_back({static_cast<std::uint32_t>(j), w});
    }
  }
  return rows;
}

}  // namespace oracle
}  // namespace testing
