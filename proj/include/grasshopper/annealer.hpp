#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "grasshopper/interaction.hpp"
#include "grasshopper/lawn.hpp"

namespace grasshopper {

/// Geometric cooling schedule. One sweep is N/2 proposed pair toggles.
struct AnnealSchedule {
  double t_initial = 1e-3;
  double t_final = 1e-7;
  double cooling_ratio = 0.95;
  int sweeps_per_temperature = 20;

  /// Throws InputError unless 0 < t_final <= t_initial and 0 < cooling_ratio < 1.
  void validate() const;
  /// Number of temperature levels visited: T_k = t_initial * ratio^k >= t_final.
  std::size_t level_count() const;
};

/// Self-scaling defaults: t_initial is `probe_scale` times the standard
/// deviation of the toggle delta over `probes` random pair toggles from the
/// starting state; t_final = t_initial * final_ratio.
struct AutoSchedule {
  double probe_scale = 2.0;
  int probes = 1000;
  double final_ratio = 1e-4;
  double cooling_ratio = 0.95;
  int sweeps_per_temperature = 20;
};

using ScheduleChoice = std::variant<AnnealSchedule, AutoSchedule>;

AnnealSchedule auto_schedule(const LawnState& state, const InteractionTable& table, std::uint64_t seed,
                             const AutoSchedule& params = {});

AnnealSchedule resolve_schedule(const ScheduleChoice& choice, const LawnState& state, const InteractionTable& table,
                                std::uint64_t seed);

struct TracePoint {
  double temperature = 0.0;
  double mean_probability = 0.0;
  double acceptance_rate = 0.0;
  double best_probability = 0.0;
};

struct AnnealResult {
  LawnState best_state;
  double best_probability = 0.0;
  std::vector<TracePoint> trace;
  std::uint64_t seed = 0;
  int replica_id = 0;
  AnnealSchedule schedule;
};

/// Everything needed to continue an interrupted run bit-exactly. Captured
/// between temperature levels.
struct AnnealCheckpoint {
  AnnealSchedule schedule;
  std::uint64_t seed = 0;
  std::uint64_t rng_counter = 0;
  std::size_t next_level = 0;
  std::size_t sweeps_since_recompute = 0;
  LawnState current;
  double current_probability = 0.0;
  LawnState best;
  double best_probability = 0.0;
  std::vector<TracePoint> trace;
};

struct AnnealHooks {
  /// Called after every completed temperature level. Return false to stop
  /// early; the checkpoint then describes where to resume.
  std::function<bool(const AnnealCheckpoint&)> on_level;
  /// Called with every state the chain visits (after each accepted move is
  /// applied). Testing aid; slows the run.
  std::function<void(const LawnState&)> on_visit;
};

/// Sweeps between exact recomputations of the running probability.
inline constexpr std::size_t kRecomputeInterval = 100;

/// Metropolis simulated annealing on H = -P with single pair-toggle moves.
/// Returns the best state ever visited. Deterministic given the seed.
AnnealResult anneal(const LawnState& initial, const InteractionTable& table, const AnnealSchedule& schedule,
                    std::uint64_t seed, const AnnealHooks& hooks = {});

/// Continues a run from a checkpoint; the result equals that of the
/// uninterrupted run.
AnnealResult resume_anneal(const AnnealCheckpoint& checkpoint, const InteractionTable& table,
                           const AnnealHooks& hooks = {});

/// Per-replica checkpoint wiring for replica_search.
struct ReplicaHooks {
  std::function<AnnealHooks(int replica)> hooks_for;
  /// A checkpoint to continue replica k from, if any.
  std::function<std::optional<AnnealCheckpoint>(int replica)> resume_from;
};

/// Independent replicas k = 0..n_replicas-1, replica k starting from
/// initializers[k % size] with seed base_seed + k. Returns the replica with the
/// highest best_probability (lowest replica id on ties), independent of the
/// thread count.
AnnealResult replica_search(const std::vector<LawnState>& initializers, const InteractionTable& table,
                            const ScheduleChoice& schedule, std::uint64_t base_seed, int n_replicas,
                            unsigned threads = 1, std::vector<AnnealResult>* all_results = nullptr,
                            const ReplicaHooks* replica_hooks = nullptr);

}  // namespace grasshopper
