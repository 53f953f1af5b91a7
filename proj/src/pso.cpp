#include "uavsched/pso.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "uavsched/errors.hpp"

namespace uavsched {

namespace {

struct Keyed {
  int id;
  double key;
};

std::vector<int> orderBy(const TaskSet& ts, const std::vector<double>& key, bool descending) {
  std::vector<Keyed> v;
  for (std::size_t i = 0; i < ts.size(); ++i) v.push_back({ts[i].id, key[i]});
  std::sort(v.begin(), v.end(), [&](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return descending ? a.key > b.key : a.key < b.key;
    return a.id < b.id;
  });
  std::vector<int> out;
  for (const auto& k : v) out.push_back(k.id);
  return out;
}

}  // namespace

std::string_view toString(PriorityRule rule) {
  switch (rule) {
    case PriorityRule::MinCumulativePredecessors: return "MinCumulativePredecessors";
    case PriorityRule::MinDirectPredecessors: return "MinDirectPredecessors";
    case PriorityRule::MaxCumulativeSuccessors: return "MaxCumulativeSuccessors";
    case PriorityRule::MaxDirectSuccessors: return "MaxDirectSuccessors";
    case PriorityRule::MaxProcessingTime: return "MaxProcessingTime";
    case PriorityRule::MinProcessingTime: return "MinProcessingTime";
    case PriorityRule::MaxRankedPositionalWeight: return "MaxRankedPositionalWeight";
    case PriorityRule::MinInversePositionalWeight: return "MinInversePositionalWeight";
    case PriorityRule::LessOccupiedPosition: return "LessOccupiedPosition";
    case PriorityRule::MostOccupiedPosition: return "MostOccupiedPosition";
  }
  return "?";
}

std::vector<int> prioritySequence(PriorityRule rule, const TaskSet& ts) {
  const auto n = ts.size();
  std::vector<double> key(n);
  auto weightOver = [&](std::size_t i, const std::vector<std::size_t>& others) {
    double w = static_cast<double>(ts[i].processingTime);
    for (auto o : others) w += static_cast<double>(ts[o].processingTime);
    return w;
  };
  std::map<std::string, Seconds> load;
  for (const auto& [pos, l] : projectedOccupationLoad(ts)) load[pos] = l;

  bool descending = false;
  for (std::size_t i = 0; i < n; ++i) {
    switch (rule) {
      case PriorityRule::MinCumulativePredecessors:
        key[i] = static_cast<double>(ts.cumulativePredecessors(i).size());
        break;
      case PriorityRule::MinDirectPredecessors:
        key[i] = static_cast<double>(ts.directPredecessors(i).size());
        break;
      case PriorityRule::MaxCumulativeSuccessors:
        key[i] = static_cast<double>(ts.cumulativeSuccessors(i).size());
        descending = true;
        break;
      case PriorityRule::MaxDirectSuccessors:
        key[i] = static_cast<double>(ts.directSuccessors(i).size());
        descending = true;
        break;
      case PriorityRule::MaxProcessingTime:
        key[i] = static_cast<double>(ts[i].processingTime);
        descending = true;
        break;
      case PriorityRule::MinProcessingTime:
        key[i] = static_cast<double>(ts[i].processingTime);
        break;
      case PriorityRule::MaxRankedPositionalWeight:
        key[i] = weightOver(i, ts.cumulativeSuccessors(i));
        descending = true;
        break;
      case PriorityRule::MinInversePositionalWeight:
        key[i] = weightOver(i, ts.cumulativePredecessors(i));
        break;
      case PriorityRule::LessOccupiedPosition:
        key[i] = static_cast<double>(load.at(ts[i].startPos));
        break;
      case PriorityRule::MostOccupiedPosition:
        key[i] = static_cast<double>(load.at(ts[i].startPos));
        descending = true;
        break;
    }
  }
  return orderBy(ts, key, descending);
}

void SwarmConfig::validate() const {
  if (particleCount < static_cast<int>(kAllPriorityRules.size()))
    throw ConfigError("particle count must be at least " + std::to_string(kAllPriorityRules.size()));
  if (maxGenerations < 1 || noImprovementStop < 1) throw ConfigError("generation limits must be positive");
  if (c1 < 0 || c2 < 0 || inertia < 0 || inertia > 1) throw ConfigError("PSO coefficients out of range");
  if (threads < 1) throw ConfigError("thread count must be positive");
}

std::vector<std::mt19937_64> particleGenerators(std::uint64_t seed, std::size_t count) {
  std::vector<std::mt19937_64> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    out.emplace_back(seq);
  }
  return out;
}

std::vector<Particle> initialSwarm(const TaskSet& ts, const SwarmConfig& cfg) {
  cfg.validate();
  std::vector<Particle> swarm;
  std::set<std::vector<int>> seen;
  for (auto rule : kAllPriorityRules) {
    Particle p;
    p.sequence = prioritySequence(rule, ts);
    seen.insert(p.sequence);
    swarm.push_back(std::move(p));
  }
  auto rngs = particleGenerators(cfg.rngSeed, static_cast<std::size_t>(cfg.particleCount));
  for (auto i = swarm.size(); i < static_cast<std::size_t>(cfg.particleCount); ++i) {
    Particle p;
    p.sequence = ts.ids();
    for (int attempt = 0; attempt < 20; ++attempt) {
      std::shuffle(p.sequence.begin(), p.sequence.end(), rngs[i]);
      if (!seen.contains(p.sequence)) break;
    }
    seen.insert(p.sequence);
    swarm.push_back(std::move(p));
  }
  for (auto& p : swarm) p.bestSequence = p.sequence;
  return swarm;
}

std::vector<Swap> swapsToward(std::span<const int> from, std::span<const int> target) {
  std::vector<int> x(from.begin(), from.end());
  std::map<int, std::size_t> where;
  for (std::size_t i = 0; i < x.size(); ++i) where[x[i]] = i;
  std::vector<Swap> out;
  for (std::size_t i = 0; i < x.size() && i < target.size(); ++i) {
    if (x[i] == target[i]) continue;
    const auto j = where.at(target[i]);
    out.emplace_back(i, j);
    where[x[i]] = j;
    where[x[j]] = i;
    std::swap(x[i], x[j]);
  }
  return out;
}

void applySwaps(std::vector<int>& sequence, std::span<const Swap> swaps) {
  for (const auto& [i, j] : swaps) std::swap(sequence.at(i), sequence.at(j));
}

void updateVelocityAndSwarm(std::vector<Particle>& swarm, std::span<const int> globalBest, const SwarmConfig& cfg,
                            std::span<std::mt19937_64> rngs) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < swarm.size(); ++k) {
    auto& p = swarm[k];
    auto& rng = rngs[k];
    const double keepLocal = std::min(1.0, cfg.c1 * unit(rng));
    const double keepGlobal = std::min(1.0, cfg.c2 * unit(rng));

    std::vector<Swap> v(p.velocity.begin(),
                        p.velocity.begin() + static_cast<std::ptrdiff_t>(cfg.inertia * static_cast<double>(p.velocity.size())));
    for (const auto& s : swapsToward(p.sequence, p.bestSequence))
      if (unit(rng) < keepLocal) v.push_back(s);
    for (const auto& s : swapsToward(p.sequence, globalBest))
      if (unit(rng) < keepGlobal) v.push_back(s);

    applySwaps(p.sequence, v);
    p.velocity = std::move(v);
  }
}

OptimizeResult optimize(const TaskSet& ts, std::span<const UavSpec> fleet, const MapGraph& map,
                        const EnergyModel& energy, const SwarmConfig& cfg, const ScheduleHook& onFeasible) {
  cfg.validate();
  const auto clockStart = std::chrono::steady_clock::now();
  const SchedulingProblem problem(ts, {fleet.begin(), fleet.end()}, map, energy);
  auto swarm = initialSwarm(ts, cfg);
  auto rngs = particleGenerators(cfg.rngSeed ^ 0x9e3779b97f4a7c15ULL, swarm.size());

  std::map<std::vector<int>, std::optional<Seconds>> cache;
  OptimizeResult result;
  std::optional<Seconds> globalFitness;
  std::vector<int> globalSequence = swarm.front().sequence;

  // Schedules every uncached sequence of the swarm, in parallel if asked,
  // then records fitness and fires the hook in particle order.
  auto evaluate = [&]() {
    std::vector<const std::vector<int>*> pending;
    std::set<std::vector<int>> queued;
    for (const auto& p : swarm)
      if (!cache.contains(p.sequence) && queued.insert(p.sequence).second) pending.push_back(&p.sequence);

    std::vector<std::optional<Schedule>> out(pending.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (auto i = next++; i < pending.size(); i = next++) out[i] = scheduleSequence(problem, *pending[i]);
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), pending.size());
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    result.evaluations += pending.size();

    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto& seq = *pending[i];
      if (!out[i]) {
        cache.emplace(seq, std::nullopt);
        continue;
      }
      cache.emplace(seq, out[i]->reportedEnergy);
      if (onFeasible) onFeasible(seq, *out[i]);
    }

    bool improved = false;
    for (auto& p : swarm) {
      p.fitness = cache.at(p.sequence);
      if (p.fitness && (!p.bestFitness || *p.fitness < *p.bestFitness)) {
        p.bestFitness = p.fitness;
        p.bestSequence = p.sequence;
      }
      if (p.fitness && (!globalFitness || *p.fitness < *globalFitness)) {
        globalFitness = p.fitness;
        globalSequence = p.sequence;
        improved = true;
        for (std::size_t i = 0; i < pending.size(); ++i)
          if (*pending[i] == p.sequence) result.schedule = *out[i];
      }
    }
    return improved;
  };

  auto record = [&](int generation) {
    GenerationLog g;
    g.generation = generation;
    g.bestEnergy = globalFitness;
    double sum = 0;
    for (const auto& p : swarm)
      if (p.fitness) {
        ++g.feasibleCount;
        sum += static_cast<double>(*p.fitness);
      }
    if (g.feasibleCount > 0) g.meanEnergy = sum / g.feasibleCount;
    g.elapsedMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - clockStart).count();
    result.log.push_back(g);
  };

  evaluate();
  record(0);
  int stale = 0;
  for (int gen = 1; gen <= cfg.maxGenerations; ++gen) {
    updateVelocityAndSwarm(swarm, globalSequence, cfg, rngs);
    const bool improved = evaluate();
    record(gen);
    stale = improved ? 0 : stale + 1;
    if (stale >= cfg.noImprovementStop || ts.size() <= 1) break;
  }

  if (!globalFitness)
    throw NoFeasibleFound("no particle produced a feasible schedule; the tasks may be too tight for the available "
                          "resources");
  result.sequence = globalSequence;
  result.energy = *globalFitness;
  return result;
}

std::string logToCsv(std::span<const GenerationLog> log) {
  std::ostringstream out;
  out << "generation,best_energy,mean_energy,feasible_count,elapsed_ms\n";
  out.setf(std::ios::fixed);
  for (const auto& g : log) {
    out << g.generation << ',';
    if (g.bestEnergy) out << *g.bestEnergy;
    out << ',';
    if (g.meanEnergy) {
      out.precision(2);
      out << *g.meanEnergy;
    }
    out << ',' << g.feasibleCount << ',';
    out.precision(3);
    out << g.elapsedMs << '\n';
  }
  return out.str();
}

}  // namespace uavsched
