#include "grasshopper/sphere_grid.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "grasshopper/errors.hpp"

namespace grasshopper {

double geodesic_angle(const Vec3& u, const Vec3& v) {
  return 2.0 * std::atan2(norm(u - v), norm(u + v));
}

namespace {

constexpr double kPairingQuantum = 1e-6;

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::int64_t c : {k.x, k.y, k.z}) {
      h ^= static_cast<std::uint64_t>(c);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

CellKey quantize(const Vec3& p) {
  return {std::llround(p.x / kPairingQuantum), std::llround(p.y / kPairingQuantum),
          std::llround(p.z / kPairingQuantum)};
}

std::string fnv1a_hex(std::span<const Vec3> points) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const Vec3& p : points) {
    for (double c : {p.x, p.y, p.z}) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &c, sizeof(double));
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double colatitude(const Vec3& p) { return std::atan2(std::hypot(p.x, p.y), p.z); }

}  // namespace

SphericalGrid::SphericalGrid(std::vector<Vec3> points, std::string source_tag)
    : points_(std::move(points)), source_tag_(std::move(source_tag)) {
  const std::size_t n = points_.size();
  if (n < 2) throw InputError("grid needs at least two points");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw InputError("grid too large");

  for (std::size_t i = 0; i < n; ++i) {
    Vec3& p = points_[i];
    const double len = norm(p);
    if (!std::isfinite(len) || std::abs(len - 1.0) > kUnitNormTolerance) {
      throw InputError("grid point " + std::to_string(i) + " is not unit length (|p| = " +
                       std::to_string(len) + ")");
    }
    // Already-unit points are kept bit-for-bit so save/load round-trips exactly.
    if (std::abs(dot(p, p) - 1.0) > 1e-15) p = (1.0 / len) * p;
  }

  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellKeyHash> cells;
  cells.reserve(n);
  for (std::size_t i = 0; i < n; ++i) cells[quantize(points_[i])].push_back(static_cast<std::uint32_t>(i));

  constexpr auto kUnpaired = std::numeric_limits<std::uint32_t>::max();
  antipode_.assign(n, kUnpaired);
  for (std::size_t i = 0; i < n; ++i) {
    if (antipode_[i] != kUnpaired) continue;
    const Vec3 target = -points_[i];
    const CellKey base = quantize(target);
    std::uint32_t best = kUnpaired;
    double best_dist = kAntipodalTolerance;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = cells.find({base.x + dx, base.y + dy, base.z + dz});
          if (it == cells.end()) continue;
          for (std::uint32_t j : it->second) {
            if (j == i || antipode_[j] != kUnpaired) continue;
            const double d = norm(points_[i] + points_[j]);
            if (d < best_dist) {
              best_dist = d;
              best = j;
            }
          }
        }
      }
    }
    if (best == kUnpaired) throw GridNotAntipodal(i);
    antipode_[i] = best;
    antipode_[best] = static_cast<std::uint32_t>(i);
  }

  pair_of_.assign(n, 0);
  pair_rep_.reserve(n / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = antipode_[i];
    if (j < i) continue;
    const auto pair = static_cast<std::uint32_t>(pair_rep_.size());
    const bool i_rep = lex_greater(points_[i], points_[j]);
    pair_rep_.push_back(static_cast<std::uint32_t>(i_rep ? i : j));
    pair_of_[i] = pair;
    pair_of_[j] = pair;
  }

  spacing_ = std::sqrt(4.0 * std::numbers::pi / static_cast<double>(n));
  content_hash_ = fnv1a_hex(points_);
}

SphericalGrid parse_grid(std::string_view text, std::string source_tag) {
  std::vector<Vec3> points;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::array<double, 3> coords{};
    std::size_t count = 0;
    std::size_t k = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == ','; };
    while (k < line.size()) {
      while (k < line.size() && is_space(line[k])) ++k;
      if (k >= line.size()) break;
      std::size_t tok_end = k;
      while (tok_end < line.size() && !is_space(line[tok_end])) ++tok_end;
      if (count == 3) throw ParseError("grid line " + std::to_string(line_no) + ": more than three values");
      double value = 0.0;
      const char* first = line.data() + k;
      const char* last = line.data() + tok_end;
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc{} || ptr != last) {
        throw ParseError("grid line " + std::to_string(line_no) + ": cannot parse '" +
                         std::string(line.substr(k, tok_end - k)) + "'");
      }
      coords[count++] = value;
      k = tok_end;
    }
    if (count == 0) continue;
    if (count != 3) throw ParseError("grid line " + std::to_string(line_no) + ": expected three values");
    points.push_back({coords[0], coords[1], coords[2]});
    if (end == text.size()) break;
  }
  return SphericalGrid(std::move(points), std::move(source_tag));
}

SphericalGrid load_grid(const std::filesystem::path& path, std::string source_tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open grid file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str(), std::move(source_tag));
}

std::string format_grid(const SphericalGrid& grid) {
  std::string out;
  out.reserve(grid.size() * 72);
  char buf[128];
  for (const Vec3& p : grid.points()) {
    std::array<double, 3> c{p.x, p.y, p.z};
    std::size_t len = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k > 0) buf[len++] = ' ';
      auto [ptr, ec] = std::to_chars(buf + len, buf + sizeof(buf), c[k]);
      len = static_cast<std::size_t>(ptr - buf);
    }
    buf[len++] = '\n';
    out.append(buf, len);
  }
  return out;
}

void save_grid(const SphericalGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write grid file " + path.string());
  out << format_grid(grid);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

SphericalGrid generate_fibonacci_antipodal(std::size_t n_pairs) {
  if (n_pairs < 3) throw InputError("fibonacci grid needs n_pairs >= 3, got " + std::to_string(n_pairs));
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double m = 2.0 * static_cast<double>(n_pairs);
  std::vector<Vec3> points;
  points.reserve(2 * n_pairs);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    // z = 1 - (2k+1)/(2n) lies in (0, 1) for k < n, so no site sits on the equator.
    double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / m;
    if (z <= 0.0) z = 0.5 / m;
    const double r = std::sqrt((1.0 - z) * (1.0 + z));
    const double lon = std::fmod(golden_angle * static_cast<double>(k), 2.0 * std::numbers::pi);
    const Vec3 p{r * std::cos(lon), r * std::sin(lon), z};
    points.push_back(p);
    points.push_back(-p);
  }
  return SphericalGrid(std::move(points), "fibonacci-antipodal");
}

LatitudeBins::LatitudeBins(const SphericalGrid& grid, double band_height) : band_height_(band_height) {
  if (!(band_height > 0.0)) throw InputError("band height must be positive");
  band_count_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::numbers::pi / band_height)));
  std::vector<std::size_t> band(grid.size());
  std::vector<std::size_t> counts(band_count_, 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto b = static_cast<std::size_t>(colatitude(grid.point(i)) / band_height_);
    band[i] = std::min(b, band_count_ - 1);
    ++counts[band[i]];
  }
  band_offsets_.assign(band_count_ + 1, 0);
  for (std::size_t b = 0; b < band_count_; ++b) band_offsets_[b + 1] = band_offsets_[b] + counts[b];
  sites_.resize(grid.size());
  std::vector<std::size_t> fill(band_offsets_.begin(), band_offsets_.end() - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) sites_[fill[band[i]]++] = static_cast<std::uint32_t>(i);
}

std::pair<std::size_t, std::size_t> LatitudeBins::candidate_range(const Vec3& center, double max_angle) const {
  const double c = colatitude(center);
  const double lo = std::max(0.0, c - max_angle);
  const double hi = std::min(std::numbers::pi, c + max_angle);
  // One band of slack on each side absorbs rounding in the band assignment.
  const auto b_lo = static_cast<std::size_t>(std::max(0.0, std::floor(lo / band_height_) - 1.0));
  const auto b_hi = std::min(band_count_ - 1, static_cast<std::size_t>(hi / band_height_) + 1);
  return {band_offsets_[std::min(b_lo, band_count_ - 1)], band_offsets_[b_hi + 1]};
}

}  // namespace grasshopper
