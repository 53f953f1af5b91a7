#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "uavsched/datagen.hpp"
#include "uavsched/errors.hpp"
#include "uavsched/oracle.hpp"
#include "uavsched/rtaa.hpp"
#include "uavsched/validator.hpp"

using namespace uavsched;
using fixtures::inspection;

namespace {

const EnergyModel kEnergy{};

void checkOptimumSchedule(const OracleResult& r, const TaskSet& ts, std::span<const UavSpec> fleet,
                          const MapGraph& map) {
  REQUIRE(r.energy);
  REQUIRE(r.schedule);
  const auto report = validateSchedule(*r.schedule, ts, fleet, map, kEnergy);
  for (const auto& v : report.violations) INFO(v.check << ": " << v.detail);
  CHECK(report.ok);
  CHECK(report.energy == *r.energy);
}

}  // namespace

TEST_CASE("single task costs its approach flight plus its execution") {
  const auto map = fixtures::lineMap(10);
  const auto fleet = fixtures::fleetAt("S", 1);
  const TaskSet ts({inspection(1, "X", 0, 500)});
  const auto r = bruteForceOptimal(ts, fleet, map, kEnergy);
  CHECK_FALSE(r.exhausted);
  CHECK(r.energy == Seconds{20});
  checkOptimumSchedule(r, ts, fleet, map);
}

TEST_CASE("two inspections: one tour beats two separate trips") {
  // S-X 10, S-Y 30, X-Y 5: S->X, inspect, X->Y, inspect = 10 + 10 + 5 + 10.
  const auto map = fixtures::triangleMap(10, 30, 5);
  const TaskSet ts({inspection(1, "X", 0, 500), inspection(2, "Y", 0, 500)});
  for (int uavs : {1, 2}) {
    const auto fleet = fixtures::fleetAt("S", uavs);
    const auto r = bruteForceOptimal(ts, fleet, map, kEnergy);
    CHECK_FALSE(r.exhausted);
    CHECK(r.energy == Seconds{35});
    checkOptimumSchedule(r, ts, fleet, map);
  }
}

TEST_CASE("no feasible schedule") {
  const auto map = fixtures::lineMap(10);
  const auto fleet = fixtures::fleetAt("S", 1);
  const TaskSet clash({inspection(1, "X", 10, 20), inspection(2, "X", 10, 20)});
  const auto r = bruteForceOptimal(clash, fleet, map, kEnergy);
  CHECK_FALSE(r.exhausted);
  CHECK_FALSE(r.energy);
  CHECK_FALSE(r.schedule);
}

TEST_CASE("optimum bounds every scheduler order on a subset of the ten-task reference instance") {
  const auto map = fixtures::labMap();
  const auto full = fixtures::table1();
  const TaskSet ts({full.byId(5), full.byId(8), full.byId(9), full.byId(1)});
  const auto fleet = makeFleet(1, map);
  const auto r = bruteForceOptimal(ts, fleet, map, kEnergy, {6, 2, 300.0});
  CHECK_FALSE(r.exhausted);
  checkOptimumSchedule(r, ts, fleet, map);

  std::vector<int> order{1, 5, 8, 9};
  int feasible = 0;
  do {
    if (const auto s = scheduleSequence(order, ts, fleet, map, kEnergy)) {
      ++feasible;
      CHECK(*r.energy <= s->reportedEnergy);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(feasible > 0);
}

TEST_CASE("another UAV never raises the optimum") {
  const auto base = fixtures::labMap();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    DatasetConfig dc;
    dc.taskCount = 3;
    dc.predMean = 1;
    dc.slackMean = 300;
    dc.seed = seed;
    dc.unchecked = true;
    const auto ts = generateDataset(dc, base);
    const auto one = bruteForceOptimal(ts, makeFleet(1, base), base, kEnergy, {6, 2, 120.0});
    const auto two = bruteForceOptimal(ts, makeFleet(2, base), base, kEnergy, {6, 2, 120.0});
    REQUIRE_FALSE(one.exhausted);
    REQUIRE_FALSE(two.exhausted);
    if (one.energy) {
      REQUIRE(two.energy);
      CHECK(*two.energy <= *one.energy);
    }
    if (two.energy) checkOptimumSchedule(two, ts, makeFleet(2, base), base);
  }
}

TEST_CASE("limits") {
  const auto map = fixtures::lineMap(10);
  std::vector<Task> seven;
  for (int i = 1; i <= 7; ++i) seven.push_back(inspection(i, "X", 0, 5000));
  CHECK_THROWS_AS(bruteForceOptimal(TaskSet(seven), fixtures::fleetAt("S", 1), map, kEnergy), LimitExceeded);
  const TaskSet one({inspection(1, "X", 0, 500)});
  CHECK_THROWS_AS(bruteForceOptimal(one, fixtures::fleetAt("S", 3), map, kEnergy), LimitExceeded);
  CHECK_NOTHROW(bruteForceOptimal(one, fixtures::fleetAt("S", 3), map, kEnergy, {6, 3, 10.0}));
}

TEST_CASE("limitations are documented") {
  const std::string text(oracleLimitations());
  CHECK(text.find("CPLEX") != std::string::npos);
  CHECK(text.find("not reproduced") != std::string::npos);
}
