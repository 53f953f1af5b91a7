#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "uavsched/datagen.hpp"
#include "uavsched/errors.hpp"
#include "uavsched/pso.hpp"
#include "uavsched/validator.hpp"

using namespace uavsched;

namespace {

const EnergyModel kEnergy{};

// Closure over raw id lists, independent of TaskSet's cached indices.
std::set<int> reach(const TaskSet& ts, int id, bool forward) {
  std::map<int, std::vector<int>> next;
  for (const auto& t : ts.tasks())
    for (int p : t.predecessors) {
      if (forward)
        next[p].push_back(t.id);
      else
        next[t.id].push_back(p);
    }
  std::set<int> out;
  std::vector<int> todo = next[id];
  while (!todo.empty()) {
    const int x = todo.back();
    todo.pop_back();
    if (out.insert(x).second)
      for (int y : next[x]) todo.push_back(y);
  }
  return out;
}

std::vector<int> sortedBy(const TaskSet& ts, const std::map<int, Seconds>& key, bool descending) {
  auto ids = ts.ids();
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (key.at(a) != key.at(b)) return descending ? key.at(a) > key.at(b) : key.at(a) < key.at(b);
    return a < b;
  });
  return ids;
}

std::vector<int> expectedSequence(PriorityRule rule, const TaskSet& ts) {
  std::map<int, Seconds> key;
  std::map<std::string, Seconds> load;
  for (const auto& t : ts.tasks()) load[t.startPos] += t.processingTime;
  for (const auto& t : ts.tasks()) {
    Seconds w = t.processingTime;
    switch (rule) {
      case PriorityRule::MaxRankedPositionalWeight:
        for (int s : reach(ts, t.id, true)) w += ts.byId(s).processingTime;
        key[t.id] = w;
        break;
      case PriorityRule::MinInversePositionalWeight:
        for (int p : reach(ts, t.id, false)) w += ts.byId(p).processingTime;
        key[t.id] = w;
        break;
      default: key[t.id] = load.at(t.startPos);
    }
  }
  const bool desc = rule == PriorityRule::MaxRankedPositionalWeight || rule == PriorityRule::MostOccupiedPosition;
  return sortedBy(ts, key, desc);
}

TaskSet generated(int n, int pred, int slack, std::uint64_t seed) {
  DatasetConfig dc;
  dc.taskCount = n;
  dc.predMean = pred;
  dc.slackMean = slack;
  dc.seed = seed;
  return generateDataset(dc, fixtures::labMap());
}

bool isPermutationOf(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

TEST_CASE("rule sequences on the reference instance") {
  const auto ts = fixtures::table1();
  using V = std::vector<int>;
  CHECK(prioritySequence(PriorityRule::MinCumulativePredecessors, ts) == V{5, 8, 1, 9, 10, 2, 4, 7, 3, 6});
  CHECK(prioritySequence(PriorityRule::MinDirectPredecessors, ts) == V{5, 8, 1, 2, 3, 4, 6, 9, 10, 7});
  CHECK(prioritySequence(PriorityRule::MaxCumulativeSuccessors, ts) == V{8, 5, 9, 10, 7, 1, 2, 3, 4, 6});
  CHECK(prioritySequence(PriorityRule::MaxDirectSuccessors, ts) == V{7, 8, 9, 10, 5, 1, 2, 3, 4, 6});
  CHECK(prioritySequence(PriorityRule::MaxProcessingTime, ts) == V{10, 4, 3, 6, 9, 1, 2, 5, 7, 8});
  CHECK(prioritySequence(PriorityRule::MinProcessingTime, ts) == V{1, 2, 5, 7, 8, 6, 9, 3, 4, 10});
}

TEST_CASE("weight and occupation rules match an independent recomputation") {
  const auto table = fixtures::table1();
  for (auto rule : {PriorityRule::MaxRankedPositionalWeight, PriorityRule::MinInversePositionalWeight,
                    PriorityRule::LessOccupiedPosition, PriorityRule::MostOccupiedPosition}) {
    INFO(toString(rule));
    CHECK(prioritySequence(rule, table) == expectedSequence(rule, table));
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto ts = generated(30, 2, 600, seed);
      CHECK(prioritySequence(rule, ts) == expectedSequence(rule, ts));
    }
  }
  // Hand-summed loads: d4 carries 39 + 10, so tasks 3 and 5 lead the descending order.
  CHECK(prioritySequence(PriorityRule::MostOccupiedPosition, table) == std::vector<int>{3, 5, 10, 4, 6, 9, 1, 2, 7, 8});
}

TEST_CASE("initial swarm") {
  const auto ts = fixtures::table1();
  SwarmConfig cfg;
  cfg.particleCount = 10;
  const auto ten = initialSwarm(ts, cfg);
  REQUIRE(ten.size() == 10);
  for (std::size_t i = 0; i < ten.size(); ++i) CHECK(ten[i].sequence == prioritySequence(kAllPriorityRules[i], ts));

  cfg.particleCount = 40;
  cfg.rngSeed = 11;
  const auto a = initialSwarm(ts, cfg);
  const auto b = initialSwarm(ts, cfg);
  REQUIRE(a.size() == 40);
  std::set<std::vector<int>> random;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].sequence == b[i].sequence);
    CHECK(isPermutationOf(a[i].sequence, ts.ids()));
    if (i >= 10) random.insert(a[i].sequence);
  }
  CHECK(random.size() == 30);

  const TaskSet one({fixtures::inspection(4, "a1", 0, 500)});
  for (const auto& p : initialSwarm(one, cfg)) CHECK(p.sequence == std::vector<int>{4});

  cfg.particleCount = 9;
  CHECK_THROWS_AS(initialSwarm(ts, cfg), ConfigError);
  cfg.particleCount = 40;
  cfg.c1 = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("swaps toward a target reproduce it") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    std::vector<int> x(1 + round % 17);
    std::iota(x.begin(), x.end(), 1);
    auto target = x;
    std::shuffle(x.begin(), x.end(), rng);
    std::shuffle(target.begin(), target.end(), rng);
    const auto swaps = swapsToward(x, target);
    CHECK(swaps.size() < x.size());
    auto y = x;
    applySwaps(y, swaps);
    CHECK(y == target);
  }
  const std::vector<int> same{3, 1, 2};
  CHECK(swapsToward(same, same).empty());
}

TEST_CASE("velocity update") {
  const auto ts = fixtures::table1();
  SwarmConfig cfg;
  cfg.particleCount = 12;
  auto swarm = initialSwarm(ts, cfg);
  auto rngs = particleGenerators(5, swarm.size());

  SUBCASE("fixed point") {
    const auto best = swarm[0].sequence;
    for (auto& p : swarm) p.sequence = p.bestSequence = best;
    updateVelocityAndSwarm(swarm, best, cfg, rngs);
    for (const auto& p : swarm) {
      CHECK(p.sequence == best);
      CHECK(p.velocity.empty());
    }
  }
  SUBCASE("zero coefficients keep the swarm still") {
    cfg.c1 = cfg.c2 = cfg.inertia = 0;
    const auto before = swarm;
    updateVelocityAndSwarm(swarm, swarm[3].sequence, cfg, rngs);
    for (std::size_t i = 0; i < swarm.size(); ++i) CHECK(swarm[i].sequence == before[i].sequence);
  }
  SUBCASE("sequences stay permutations") {
    for (int g = 0; g < 30; ++g) {
      for (auto& p : swarm)
        if (g % 3 == 0) p.bestSequence = swarm[static_cast<std::size_t>(g) % swarm.size()].sequence;
      updateVelocityAndSwarm(swarm, swarm[0].bestSequence, cfg, rngs);
      for (const auto& p : swarm) REQUIRE(isPermutationOf(p.sequence, ts.ids()));
    }
  }
}

TEST_CASE("optimize on the reference instance") {
  const auto map = fixtures::labMap();
  const auto ts = fixtures::table1();
  const auto fleet = makeFleet(3, map);
  SwarmConfig cfg;
  cfg.rngSeed = 2;
  std::set<std::vector<int>> hooked;
  std::size_t hookCalls = 0;
  const auto r = optimize(ts, fleet, map, kEnergy, cfg, [&](const std::vector<int>& seq, const Schedule& s) {
    ++hookCalls;
    hooked.insert(seq);
    CHECK(validateSchedule(s, ts, fleet, map, kEnergy).ok);
  });
  CHECK(hookCalls == hooked.size());
  CHECK(hooked.contains(r.sequence));

  const auto report = validateSchedule(r.schedule, ts, fleet, map, kEnergy);
  CHECK(report.ok);
  CHECK(report.energy == r.energy);
  CHECK(r.schedule.reportedEnergy == r.energy);
  for (auto rule : kAllPriorityRules)
    if (const auto s = scheduleSequence(prioritySequence(rule, ts), ts, fleet, map, kEnergy))
      CHECK(r.energy <= s->reportedEnergy);

  REQUIRE_FALSE(r.log.empty());
  CHECK(r.log.size() <= static_cast<std::size_t>(cfg.maxGenerations) + 1);
  for (std::size_t i = 1; i < r.log.size(); ++i) {
    REQUIRE(r.log[i].bestEnergy);
    if (r.log[i - 1].bestEnergy) CHECK(*r.log[i].bestEnergy <= *r.log[i - 1].bestEnergy);
  }
  CHECK(*r.log.back().bestEnergy == r.energy);

  const auto again = optimize(ts, fleet, map, kEnergy, cfg);
  CHECK(again.sequence == r.sequence);
  CHECK(again.schedule == r.schedule);
  CHECK(again.evaluations == r.evaluations);

  const auto csv = logToCsv(r.log);
  CHECK(csv.rfind("generation,best_energy,mean_energy,feasible_count,elapsed_ms\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == r.log.size() + 1);
}

TEST_CASE("optimize edge cases") {
  const auto map = fixtures::lineMap(10);
  const auto fleet = fixtures::fleetAt("S", 1);
  SwarmConfig cfg;
  const TaskSet one({fixtures::inspection(1, "X", 0, 500)});
  const auto r = optimize(one, fleet, map, kEnergy, cfg);
  CHECK(r.sequence == std::vector<int>{1});
  CHECK(r.energy == 20);
  CHECK(r.log.size() <= 2);

  // Both tasks need X at the same instant and there is one UAV.
  const TaskSet clash({fixtures::inspection(1, "X", 10, 20), fixtures::inspection(2, "X", 10, 20)});
  CHECK_THROWS_AS(optimize(clash, fleet, map, kEnergy, cfg), NoFeasibleFound);
}

TEST_CASE("threads do not change the outcome") {
  const auto map = fixtures::labMap();
  const auto ts = generated(30, 1, 600, 4);
  const auto fleet = makeFleet(3, map);
  SwarmConfig cfg;
  cfg.maxGenerations = 5;
  const auto serial = optimize(ts, fleet, map, kEnergy, cfg);
  cfg.threads = 3;
  const auto parallel = optimize(ts, fleet, map, kEnergy, cfg);
  CHECK(serial.sequence == parallel.sequence);
  CHECK(serial.energy == parallel.energy);
  CHECK(serial.evaluations == parallel.evaluations);
}
