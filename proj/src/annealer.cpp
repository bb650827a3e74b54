#include "grasshopper/annealer.hpp"

#include <array>
#include <cmath>
#include <string>

#include "grasshopper/errors.hpp"
#include "grasshopper/parallel.hpp"
#include "grasshopper/rng.hpp"

namespace grasshopper {

void AnnealSchedule::validate() const {
  if (!(t_initial > 0.0) || !std::isfinite(t_initial)) throw InputError("t_initial must be positive");
  if (!(t_final > 0.0) || t_final > t_initial) throw InputError("t_final must lie in (0, t_initial]");
  if (!(cooling_ratio > 0.0 && cooling_ratio < 1.0)) throw InputError("cooling_ratio must lie in (0, 1)");
  if (sweeps_per_temperature < 1) throw InputError("sweeps_per_temperature must be >= 1");
}

namespace {

double level_temperature(const AnnealSchedule& s, std::size_t level) {
  return s.t_initial * std::pow(s.cooling_ratio, static_cast<double>(level));
}

}  // namespace

std::size_t AnnealSchedule::level_count() const {
  std::size_t levels = 0;
  while (level_temperature(*this, levels) >= t_final * (1.0 - 1e-12)) ++levels;
  return levels;
}

AnnealSchedule auto_schedule(const LawnState& state, const InteractionTable& table, std::uint64_t seed,
                             const AutoSchedule& params) {
  if (params.probes < 2) throw InputError("auto schedule needs at least two probes");
  const SphericalGrid& grid = grid_of(state);
  const int lawns = setup_of(state) == Setup::One ? 1 : 2;
  // A stream distinct from the annealing stream of the same seed.
  CounterRng rng(seed ^ 0xa5a5a5a5a5a5a5a5ULL);
  double mean = 0.0;
  double m2 = 0.0;
  for (int k = 0; k < params.probes; ++k) {
    const int which = lawns == 1 ? 1 : 1 + static_cast<int>(rng.below(2));
    const std::size_t site = grid.pair_representative(rng.below(grid.pair_count()));
    const double d = delta_pair_toggle(state, table, which, site);
    const double delta = d - mean;
    mean += delta / (k + 1);
    m2 += delta * (d - mean);
  }
  const double sd = std::sqrt(m2 / (params.probes - 1));
  AnnealSchedule s;
  s.t_initial = std::max(params.probe_scale * sd, 1e-15);
  s.t_final = s.t_initial * params.final_ratio;
  s.cooling_ratio = params.cooling_ratio;
  s.sweeps_per_temperature = params.sweeps_per_temperature;
  s.validate();
  return s;
}

AnnealSchedule resolve_schedule(const ScheduleChoice& choice, const LawnState& state, const InteractionTable& table,
                                std::uint64_t seed) {
  if (const auto* fixed = std::get_if<AnnealSchedule>(&choice)) {
    fixed->validate();
    return *fixed;
  }
  return auto_schedule(state, table, seed, std::get<AutoSchedule>(choice));
}

namespace {

struct Move {
  int lawn;
  std::uint32_t site;
};

// Keeps `base` plus the moves applied since, so that base + journal is the
// current state. A new best only records a journal position; the best state
// is materialized lazily.
class BestTracker {
 public:
  BestTracker(LawnState current, LawnState best, double best_probability)
      : base_(std::move(current)), best_(std::move(best)), best_probability_(best_probability) {}

  void record(const Move& m) { journal_.push_back(m); }
  void mark_best(double p) {
    best_probability_ = p;
    best_pos_ = journal_.size();
  }
  double probability() const { return best_probability_; }

  const LawnState& best() {
    if (best_pos_) {
      advance(*best_pos_);
      best_ = base_;
      best_pos_.reset();
    }
    return best_;
  }

  // Bounds journal memory.
  void compact(std::size_t limit) {
    if (journal_.size() <= limit) return;
    best();
    advance(journal_.size());
  }

 private:
  void advance(std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) apply_pair_toggle(base_, journal_[k].lawn, journal_[k].site);
    journal_.erase(journal_.begin(), journal_.begin() + static_cast<std::ptrdiff_t>(count));
    if (best_pos_) *best_pos_ -= count;
  }

  LawnState base_;
  std::vector<Move> journal_;
  LawnState best_;
  double best_probability_;
  std::optional<std::size_t> best_pos_;
};

// Local fields f_k = sum_j w_kj s_j for every lawn, maintained under pair
// toggles so a proposal costs O(1) and an accepted move O(row length).
// Weights are held in 2^-40 fixed point: the fields are then exact integers,
// never drift, and depend only on the current state, never on its history.
class LocalFields {
 public:
  static constexpr double kScale = 0x1.0p40;

  LocalFields(const InteractionTable& table, const LawnState& state)
      : grid_(table.grid()), lawns_(setup_of(state) == Setup::One ? 1 : 2), step_(table.prefactor() / kScale) {
    const std::size_t n = grid_.size();
    offsets_.assign(table.offsets().begin(), table.offsets().end());
    sites_.reserve(table.entry_count());
    weights_.reserve(table.entry_count());
    row_total_.assign(n, 0);
    partner_weight_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const Neighbor& nb : table.neighbors(i)) {
        const auto w = static_cast<std::int64_t>(std::llround(nb.weight * kScale));
        sites_.push_back(nb.site);
        weights_.push_back(w);
        row_total_[i] += w;
        if (nb.site == grid_.antipode(i)) partner_weight_[i] = w;
      }
    }
    fields_[0] = compute(bits(state, 1));
    if (lawns_ == 2) fields_[1] = compute(bits(state, 2));
  }

  // Same quantity as delta_pair_toggle, up to the weight quantization.
  double delta(const LawnState& state, int which, std::size_t site) const {
    const std::size_t partner = grid_.antipode(site);
    const std::int64_t d = bits(state, which)[site] ? -1 : 1;
    std::int64_t q = 0;
    if (lawns_ == 1) {
      const auto& f = fields_[0];
      q = 2 * d * (f[site] - f[partner]) - 2 * partner_weight_[site];
    } else if (which == 1) {
      const auto& f2 = fields_[1];
      q = d * ((row_total_[site] - f2[site]) - (row_total_[partner] - f2[partner]));
    } else {
      const auto& f1 = fields_[0];
      q = -d * (f1[site] - f1[partner]);
    }
    return step_ * static_cast<double>(q);
  }

  // Call after the toggle has been applied to `state`.
  void applied(const LawnState& state, int which, std::size_t site) {
    auto& f = fields_[static_cast<std::size_t>(which - 1)];
    const std::size_t partner = grid_.antipode(site);
    const std::int64_t d = bits(state, which)[site] ? 1 : -1;
    for (std::size_t k = offsets_[site]; k < offsets_[site + 1]; ++k) f[sites_[k]] += d * weights_[k];
    for (std::size_t k = offsets_[partner]; k < offsets_[partner + 1]; ++k) f[sites_[k]] -= d * weights_[k];
  }

 private:
  static std::span<const std::uint8_t> bits(const LawnState& state, int which) {
    if (const auto* lawn = std::get_if<Lawn>(&state)) return lawn->site_bits();
    const auto& c = std::get<TwoLawnConfig>(state);
    return which == 1 ? c.first.site_bits() : c.second.site_bits();
  }

  std::vector<std::int64_t> compute(std::span<const std::uint8_t> s) const {
    std::vector<std::int64_t> f(s.size(), 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) f[i] += weights_[k] * s[sites_[k]];
    }
    return f;
  }

  const SphericalGrid& grid_;
  int lawns_;
  double step_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> sites_;
  std::vector<std::int64_t> weights_;
  std::vector<std::int64_t> row_total_;
  std::vector<std::int64_t> partner_weight_;
  std::array<std::vector<std::int64_t>, 2> fields_;
};

AnnealResult run_chain(AnnealCheckpoint cp, const InteractionTable& table, const AnnealHooks& hooks) {
  const AnnealSchedule& schedule = cp.schedule;
  schedule.validate();
  const SphericalGrid& grid = grid_of(cp.current);
  if (grid.content_hash() != table.grid().content_hash()) {
    throw GridMismatch("annealing state and interaction table were built for different grids");
  }
  const int lawns = setup_of(cp.current) == Setup::One ? 1 : 2;
  const std::size_t pairs = grid.pair_count();
  const std::size_t levels = schedule.level_count();

  CounterRng rng(cp.seed, cp.rng_counter);
  LawnState current = std::move(cp.current);
  double p = cp.current_probability;
  BestTracker best(current, std::move(cp.best), cp.best_probability);
  std::vector<TracePoint> trace = std::move(cp.trace);
  std::size_t since_recompute = cp.sweeps_since_recompute;
  LocalFields fields(table, current);

  for (std::size_t level = cp.next_level; level < levels; ++level) {
    const double t = level_temperature(schedule, level);
    std::size_t accepted = 0;
    double p_sum = 0.0;
    for (int sweep = 0; sweep < schedule.sweeps_per_temperature; ++sweep) {
      for (std::size_t move = 0; move < pairs; ++move) {
        const int which = lawns == 1 ? 1 : 1 + static_cast<int>(rng.below(2));
        const auto site = static_cast<std::uint32_t>(grid.pair_representative(rng.below(pairs)));
        const double dp = fields.delta(current, which, site);
        if (dp < 0.0 && !(rng.uniform() < std::exp(dp / t))) continue;
        apply_pair_toggle(current, which, site);
        fields.applied(current, which, site);
        p += dp;
        ++accepted;
        best.record({which, site});
        if (p > best.probability()) best.mark_best(p);
        if (hooks.on_visit) hooks.on_visit(current);
      }
      if (++since_recompute >= kRecomputeInterval) {
        p = success_probability(current, table);
        since_recompute = 0;
      }
      p_sum += p;
      best.compact(4 * pairs);
    }
    const double moves = static_cast<double>(schedule.sweeps_per_temperature) * static_cast<double>(pairs);
    trace.push_back({t, p_sum / schedule.sweeps_per_temperature, static_cast<double>(accepted) / moves,
                     best.probability()});

    if (hooks.on_level) {
      AnnealCheckpoint next{schedule, cp.seed,    rng.counter(), level + 1,          since_recompute,
                            current,  p,          best.best(), best.probability(), trace};
      if (!hooks.on_level(next)) break;
    }
  }

  AnnealResult result{best.best(), 0.0, std::move(trace), cp.seed, 0, schedule};
  result.best_probability = success_probability(result.best_state, table);
  return result;
}

}  // namespace

AnnealResult anneal(const LawnState& initial, const InteractionTable& table, const AnnealSchedule& schedule,
                    std::uint64_t seed, const AnnealHooks& hooks) {
  const double p0 = success_probability(initial, table);
  AnnealCheckpoint start{schedule, seed, 0, 0, 0, initial, p0, initial, p0, {}};
  return run_chain(std::move(start), table, hooks);
}

AnnealResult resume_anneal(const AnnealCheckpoint& checkpoint, const InteractionTable& table,
                           const AnnealHooks& hooks) {
  return run_chain(checkpoint, table, hooks);
}

AnnealResult replica_search(const std::vector<LawnState>& initializers, const InteractionTable& table,
                            const ScheduleChoice& schedule, std::uint64_t base_seed, int n_replicas,
                            unsigned threads, std::vector<AnnealResult>* all_results,
                            const ReplicaHooks* replica_hooks) {
  if (initializers.empty()) throw InputError("replica search needs at least one initializer");
  if (n_replicas < 1) throw InputError("n_replicas must be >= 1");
  std::vector<std::optional<AnnealResult>> results(static_cast<std::size_t>(n_replicas));
  parallel_for(results.size(), threads, [&](std::size_t k) {
    const int id = static_cast<int>(k);
    const AnnealHooks hooks = replica_hooks && replica_hooks->hooks_for ? replica_hooks->hooks_for(id) : AnnealHooks{};
    std::optional<AnnealCheckpoint> saved;
    if (replica_hooks && replica_hooks->resume_from) saved = replica_hooks->resume_from(id);
    AnnealResult r = [&] {
      if (saved) return resume_anneal(*saved, table, hooks);
      const LawnState& init = initializers[k % initializers.size()];
      const std::uint64_t seed = base_seed + k;
      return anneal(init, table, resolve_schedule(schedule, init, table, seed), seed, hooks);
    }();
    r.replica_id = static_cast<int>(k);
    results[k] = std::move(r);
  });
  std::size_t winner = 0;
  for (std::size_t k = 1; k < results.size(); ++k) {
    if (results[k]->best_probability > results[winner]->best_probability) winner = k;
  }
  AnnealResult best = *results[winner];
  if (all_results) {
    all_results->clear();
    for (auto& r : results) all_results->push_back(std::move(*r));
  }
  return best;
}

}  // namespace grasshopper
