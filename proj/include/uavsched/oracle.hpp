#ifndef UAVSCHED_ORACLE_HPP
#define UAVSCHED_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "uavsched/domain.hpp"
#include "uavsched/map.hpp"
#include "uavsched/rtaa.hpp"

namespace uavsched {

struct OracleLimits {
  int maxTasks = 6;
  int maxUavs = 2;
  double timeBudgetSeconds = 60.0;
};

struct OracleResult {
  /// True when the time budget stopped the search; `energy` is then only
  /// the best found, not a proven optimum.
  bool exhausted = false;
  std::optional<Seconds> energy;  // nullopt: no feasible schedule exists (or none found)
  std::optional<Schedule> schedule;
  std::uint64_t nodes = 0;
};

/// Exhaustive branch and bound over task-to-UAV assignments, per-UAV
/// orders and every integer start time, using the same idle-span battery
/// rule as the scheduler. Throws LimitExceeded above the limits.
OracleResult bruteForceOptimal(const TaskSet& tasks, std::span<const UavSpec> fleet, const MapGraph& map,
                               const EnergyModel& energy, const OracleLimits& limits = {});

/// What the oracle does and does not guarantee.
std::string_view oracleLimitations();

}  // namespace uavsched

#endif  // UAVSCHED_ORACLE_HPP
