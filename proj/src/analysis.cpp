#include "grasshopper/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "grasshopper/errors.hpp"
#include "grasshopper/io.hpp"
#include "grasshopper/parallel.hpp"

namespace grasshopper {

double quantum_probability(double theta) {
  const double c = std::cos(theta / 2.0);
  return c * c;
}

double hemisphere_probability(double theta) { return 1.0 - theta / std::numbers::pi; }

double gap_maximizer_landmark() { return std::asin(2.0 / std::numbers::pi); }

std::vector<SpecialAngle> special_angles(int q_max) {
  if (q_max < 2) throw InputError("q_max must be >= 2");
  std::vector<SpecialAngle> out;
  for (int q = 2; q <= q_max; ++q) out.push_back({q, std::numbers::pi / q, true, q % 2 == 0});
  return out;
}

int predicted_cogs(double theta, Setup setup, int mode) {
  if (!(theta > 0.0 && theta <= std::numbers::pi)) throw InputError("theta must lie in (0, pi]");
  if (mode < 1) throw InputError("mode must be >= 1");
  const double base = setup == Setup::One ? 2.0 * std::numbers::pi : std::numbers::pi;
  const double x = mode * base / theta;
  // Odd n = 2k + 1 nearest to x; the slack turns float-level ties into ties.
  const double k = std::floor((x - 1.0) / 2.0 + 0.5 + 1e-9);
  return std::max(1, static_cast<int>(2.0 * k + 1.0));
}

CogCount count_cogs(const Lawn& lawn) {
  const SphericalGrid& grid = lawn.grid();
  const std::size_t n = grid.size();
  const double h = grid.spacing();

  Vec3 moment{};
  for (std::size_t i = 0; i < n; ++i) {
    if (lawn[i]) moment = moment + grid.point(i);
  }
  // A hemisphere has mean |moment| / (N/2) = 1/2; patterns without an axis sit near 0.
  const double mean_len = norm(moment) / (0.5 * static_cast<double>(n));
  if (mean_len < 0.1) return {};
  const Vec3 e3 = normalized(moment);
  const Vec3 helper = std::abs(e3.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 e1 = normalized(cross(helper, e3));
  const Vec3 e2 = cross(e3, e1);

  const double radius = 2.0 * h;
  const double cos_radius = std::cos(radius);
  const LatitudeBins bins(grid, h);
  const auto sites = bins.band_sites();
  std::vector<double> height;
  std::vector<double> azimuth;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = grid.point(i);
    const auto [first, last] = bins.candidate_range(p, radius);
    bool boundary = false;
    for (std::size_t k = first; k < last && !boundary; ++k) {
      const std::size_t j = sites[k];
      boundary = lawn[j] != lawn[i] && dot(p, grid.point(j)) >= cos_radius;
    }
    if (!boundary) continue;
    height.push_back(dot(p, e3));
    azimuth.push_back(std::atan2(dot(p, e2), dot(p, e1)));
  }
  if (height.size() < 8) return {};

  constexpr int kMaxHarmonic = 48;
  std::vector<double> power(kMaxHarmonic + 1, 0.0);
  double total = 0.0;
  for (int m = 1; m <= kMaxHarmonic; ++m) {
    std::complex<double> c{};
    for (std::size_t k = 0; k < height.size(); ++k) c += height[k] * std::polar(1.0, -m * azimuth[k]);
    power[m] = std::norm(c);
    total += power[m];
  }
  int best = 1;
  for (int m = 3; m <= kMaxHarmonic; m += 2) {
    if (power[m] > power[best]) best = m;
  }
  // Boundary height amplitude of the dominant harmonic; below h/2 it is lattice noise.
  const double amplitude = 2.0 * std::sqrt(power[best]) / static_cast<double>(height.size());
  if (amplitude < 0.5 * h || total <= 0.0) return {};
  return {best, power[best] / total};
}

ReflectionReport verify_reflection_symmetry(const TwoLawnConfig& config, const InteractionTable& table,
                                            const InteractionTable& reflected_table) {
  ReflectionReport r;
  r.theta = table.theta();
  r.probability = success_probability_two(config, table);
  r.reflected_probability = success_probability_two(TwoLawnConfig(config.first, complement(config.second)),
                                                    reflected_table);
  r.difference = std::abs(r.probability - r.reflected_probability);
  return r;
}

ReflectionReport verify_reflection_symmetry(const TwoLawnConfig& config, double theta, const DeltaKernel& kernel) {
  const GridPtr& grid = config.first.grid_ptr();
  const InteractionTable table = build_interaction(grid, theta, kernel);
  const InteractionTable reflected = build_interaction(grid, std::numbers::pi - theta, kernel);
  return verify_reflection_symmetry(config, table, reflected);
}

LawnState make_initializer(const GridPtr& grid, double theta, Setup setup, std::string_view name, std::uint64_t seed) {
  const Vec3 z{0.0, 0.0, 1.0};
  if (setup == Setup::One) {
    if (name == "random") return random_lawn(grid, seed);
    if (name == "hemisphere") return hemisphere_lawn(grid, z);
    if (name == "cogwheel") return cogwheel_lawn(grid, predicted_cogs(theta, Setup::One), 0.5);
  } else {
    // Above pi/2 the optimum is the reflected (second lawn complemented) optimum for pi - theta.
    const bool reflect = theta > std::numbers::pi / 2.0;
    const double base = reflect ? std::numbers::pi - theta : theta;
    auto pair_with = [&](Lawn first, Lawn second) {
      return TwoLawnConfig(std::move(first), reflect ? complement(second) : std::move(second));
    };
    if (name == "random") return TwoLawnConfig(random_lawn(grid, seed), random_lawn(grid, seed ^ 0x5bd1e995ULL));
    if (name == "hemisphere") return pair_with(hemisphere_lawn(grid, z), hemisphere_lawn(grid, z));
    if (name == "cogwheel") {
      const int cogs = predicted_cogs(base, Setup::Two);
      return pair_with(cogwheel_lawn(grid, cogs, 0.5), cogwheel_lawn(grid, cogs, 0.5, std::numbers::pi / cogs));
    }
  }
  throw InputError("unknown initializer '" + std::string(name) + "' (expected random, hemisphere or cogwheel)");
}

std::vector<LawnState> default_initializers(const GridPtr& grid, double theta, Setup setup, std::uint64_t seed) {
  std::vector<LawnState> inits;
  for (const char* name : {"random", "hemisphere", "cogwheel"}) inits.push_back(make_initializer(grid, theta, setup, name, seed));
  return inits;
}

std::vector<double> default_sweep_thetas() {
  std::vector<double> thetas;
  constexpr int kPoints = 64;
  for (int k = 0; k < kPoints; ++k) thetas.push_back(std::numbers::pi * (0.05 + 0.9 * k / (kPoints - 1)));
  for (const SpecialAngle& s : special_angles(10)) thetas.push_back(s.theta);
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  return thetas;
}

std::uint64_t row_seed(std::uint64_t base_seed, std::size_t index) {
  return base_seed + 1'000'000ULL * static_cast<std::uint64_t>(index);
}

namespace {

constexpr const char* kSweepCheckpoint = "sweep_checkpoint.json";

std::filesystem::path lawn_path(const std::filesystem::path& dir, double theta, Setup setup) {
  return dir / "lawns" / ("theta_" + format_real(theta) + "_" + std::string(to_string(setup)) + ".json");
}

int cogs_of(const Lawn& lawn) {
  const CogCount c = count_cogs(lawn);
  return c.confidence >= kCogConfidenceThreshold ? c.n_cogs : 0;
}

std::vector<LawnState> initializers_for(const GridPtr& grid, double theta, Setup setup, const SweepOptions& options,
                                        std::uint64_t seed) {
  std::vector<LawnState> inits;
  for (const auto& name : options.initializers) inits.push_back(make_initializer(grid, theta, setup, name, seed));
  return inits;
}

struct RowOutput {
  CurveRow row;
  std::optional<AnnealResult> one;
  std::optional<AnnealResult> two;
};

RowOutput run_row(const GridPtr& grid, double theta, std::size_t index, const SweepOptions& options,
                  unsigned threads) {
  const InteractionTable table = build_interaction(grid, theta, options.kernel, NeighborSearch::LatitudeBands, threads);
  RowOutput out;
  CurveRow& row = out.row;
  row.theta = theta;
  row.q = quantum_probability(theta);
  row.hemisphere = hemisphere_probability(theta);
  row.seed = row_seed(options.base_seed, index);
  if (options.run_one) {
    out.one = replica_search(initializers_for(grid, theta, Setup::One, options, row.seed), table, options.schedule,
                             row.seed, options.n_replicas, threads);
    row.p_one = out.one->best_probability;
    row.gap_one = row.q - *row.p_one;
    row.n_cogs_one = cogs_of(std::get<Lawn>(out.one->best_state));
  }
  if (options.run_two) {
    const std::uint64_t seed = row.seed + static_cast<std::uint64_t>(options.n_replicas);
    out.two = replica_search(initializers_for(grid, theta, Setup::Two, options, seed), table, options.schedule, seed,
                             options.n_replicas, threads);
    row.p_two = out.two->best_probability;
    row.gap_two = row.q - *row.p_two;
    row.n_cogs_two = cogs_of(std::get<TwoLawnConfig>(out.two->best_state).first);
  }
  return out;
}

}  // namespace

ProbabilityCurve sweep(const GridPtr& grid, std::vector<double> thetas, const SweepOptions& options) {
  if (!options.run_one && !options.run_two) throw InputError("sweep needs at least one setup");
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  for (double t : thetas) {
    const double lo = min_jump_angle(*grid, options.kernel);
    if (!(t >= lo && t <= std::numbers::pi - lo)) {
      throw AngleUnresolved("jump angle unresolved by grid: theta = " + format_real(t));
    }
  }

  std::vector<std::optional<CurveRow>> rows(thetas.size());
  const bool persist = !options.output_dir.empty();
  const auto checkpoint_path = options.output_dir / kSweepCheckpoint;
  ordered_json checkpoint = {{"grid", grid->content_hash()}, {"base_seed", options.base_seed}, {"rows", ordered_json::array()}};
  if (persist && std::filesystem::exists(checkpoint_path)) {
    const auto saved = nlohmann::json::parse(read_text_file(checkpoint_path));
    if (saved.value("grid", "") != grid->content_hash() || saved.value("base_seed", std::uint64_t{0}) != options.base_seed) {
      throw InputError("sweep checkpoint in " + options.output_dir.string() + " belongs to a different run");
    }
    for (const auto& r : saved.at("rows")) {
      const CurveRow row = curve_row_from_json(r);
      for (std::size_t k = 0; k < thetas.size(); ++k) {
        if (thetas[k] == row.theta && row.seed == row_seed(options.base_seed, k)) rows[k] = row;
      }
      checkpoint["rows"].push_back(curve_row_to_json(row));
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k]) pending.push_back(k);
  }
  if (options.stop_after_rows && pending.size() > *options.stop_after_rows) pending.resize(*options.stop_after_rows);

  const unsigned workers = resolve_threads(options.threads);
  for (std::size_t start = 0; start < pending.size(); start += workers) {
    const std::size_t batch = std::min<std::size_t>(workers, pending.size() - start);
    const unsigned inner = batch == 1 ? workers : 1;
    std::vector<std::optional<RowOutput>> outputs(batch);
    parallel_for(batch, workers, [&](std::size_t b) {
      const std::size_t k = pending[start + b];
      outputs[b] = run_row(grid, thetas[k], k, options, inner);
    });
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t k = pending[start + b];
      RowOutput& out = *outputs[b];
      if (persist) {
        if (out.one) {
          write_lawn_file(lawn_path(options.output_dir, thetas[k], Setup::One),
                          make_lawn_record(out.one->best_state, thetas[k], options.kernel, out.one->best_probability,
                                           out.one->seed));
        }
        if (out.two) {
          write_lawn_file(lawn_path(options.output_dir, thetas[k], Setup::Two),
                          make_lawn_record(out.two->best_state, thetas[k], options.kernel, out.two->best_probability,
                                           out.two->seed));
        }
        checkpoint["rows"].push_back(curve_row_to_json(out.row));
      }
      rows[k] = out.row;
    }
    if (persist) write_text_file(checkpoint_path, checkpoint.dump(1) + "\n");
  }

  ProbabilityCurve curve;
  for (const auto& r : rows) {
    if (r) curve.rows.push_back(*r);
  }
  return curve;
}

}  // namespace grasshopper
