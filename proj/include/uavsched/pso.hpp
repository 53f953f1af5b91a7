#ifndef UAVSCHED_PSO_HPP
#define UAVSCHED_PSO_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uavsched/domain.hpp"
#include "uavsched/map.hpp"
#include "uavsched/rtaa.hpp"

namespace uavsched {

enum class PriorityRule {
  MinCumulativePredecessors,
  MinDirectPredecessors,
  MaxCumulativeSuccessors,
  MaxDirectSuccessors,
  MaxProcessingTime,
  MinProcessingTime,
  MaxRankedPositionalWeight,
  MinInversePositionalWeight,
  LessOccupiedPosition,
  MostOccupiedPosition,
};

inline constexpr std::array kAllPriorityRules = {
    PriorityRule::MinCumulativePredecessors, PriorityRule::MinDirectPredecessors,
    PriorityRule::MaxCumulativeSuccessors,   PriorityRule::MaxDirectSuccessors,
    PriorityRule::MaxProcessingTime,         PriorityRule::MinProcessingTime,
    PriorityRule::MaxRankedPositionalWeight, PriorityRule::MinInversePositionalWeight,
    PriorityRule::LessOccupiedPosition,      PriorityRule::MostOccupiedPosition,
};

std::string_view toString(PriorityRule rule);

/// Task ids ordered by the rule; ties by ascending id. Positional weights
/// add the processing times of all transitive successors (ranked) or
/// predecessors (inverse) to the task's own.
std::vector<int> prioritySequence(PriorityRule rule, const TaskSet& tasks);

struct SwarmConfig {
  int particleCount = 40;
  int maxGenerations = 40;
  int noImprovementStop = 10;
  double c1 = 1.0;
  double c2 = 2.0;
  double inertia = 0.5;
  std::uint64_t rngSeed = 1;
  int threads = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Transposition of two sequence indices.
using Swap = std::pair<std::size_t, std::size_t>;

struct Particle {
  std::vector<int> sequence;
  std::vector<Swap> velocity;
  std::optional<Seconds> fitness;  // nullopt = infeasible
  std::vector<int> bestSequence;
  std::optional<Seconds> bestFitness;
};

/// Ten rule sequences, then seeded random permutations (distinct where possible).
std::vector<Particle> initialSwarm(const TaskSet& tasks, const SwarmConfig& cfg);

/// Swaps that turn `from` into `target` when applied in order.
std::vector<Swap> swapsToward(std::span<const int> from, std::span<const int> target);
void applySwaps(std::vector<int>& sequence, std::span<const Swap> swaps);

/// Advances the swarm one generation (one generator per particle): keeps the
/// first inertia share of the old velocity, appends swaps toward the
/// particle's best (each kept with probability min(1, c1 r1)) and toward
/// `globalBest` (min(1, c2 r2)), then applies the new velocity.
void updateVelocityAndSwarm(std::vector<Particle>& swarm, std::span<const int> globalBest, const SwarmConfig& cfg,
                            std::span<std::mt19937_64> rngs);

/// One random generator per particle, derived from the seed and the index.
std::vector<std::mt19937_64> particleGenerators(std::uint64_t seed, std::size_t count);

struct GenerationLog {
  int generation = 0;
  std::optional<Seconds> bestEnergy;
  std::optional<double> meanEnergy;
  int feasibleCount = 0;
  double elapsedMs = 0.0;
};

struct OptimizeResult {
  std::vector<int> sequence;
  Schedule schedule;
  Seconds energy = 0;
  std::vector<GenerationLog> log;
  std::size_t evaluations = 0;
};

/// Called with every distinct feasible schedule, in a deterministic order.
using ScheduleHook = std::function<void(const std::vector<int>& sequence, const Schedule& schedule)>;

/// Throws NoFeasibleFound when no particle ever yields a schedule.
OptimizeResult optimize(const TaskSet& tasks, std::span<const UavSpec> fleet, const MapGraph& map,
                        const EnergyModel& energy, const SwarmConfig& cfg, const ScheduleHook& onFeasible = {});

/// CSV: generation,best_energy,mean_energy,feasible_count,elapsed_ms
std::string logToCsv(std::span<const GenerationLog> log);

}  // namespace uavsched

#endif  // UAVSCHED_PSO_HPP
