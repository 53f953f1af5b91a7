#ifndef UAVSCHED_VALIDATOR_HPP
#define UAVSCHED_VALIDATOR_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "uavsched/domain.hpp"
#include "uavsched/map.hpp"
#include "uavsched/rtaa.hpp"

namespace uavsched {

/// Exact battery level in battery-seconds.
using Level = boost::rational<std::int64_t>;

inline double toDouble(const Level& l) { return boost::rational_cast<double>(l); }

struct BatteryPoint {
  Seconds time = 0;
  Level level;
  std::string position;
};

struct UavBatteryTrace {
  int uavId = 0;
  std::vector<BatteryPoint> points;  // every action boundary, in order
  std::vector<double> afterTask;     // level right after each task execution
};

struct BatteryTrace {
  std::vector<UavBatteryTrace> uavs;
};

// Check ids: C1..C10 for the operational constraints, Eq1 (end = start +
// processing), Eq29 (minimum recharge), plus Route (flight duration or
// endpoints) and Chain (location/time continuity of consecutive actions).
struct Violation {
  std::string check;
  std::optional<int> uavId;
  std::optional<int> taskId;
  std::string position;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  Seconds energy = 0;
  Seconds makespan = 0;
  BatteryTrace trace;

  /// Number of violations with the given check id.
  std::size_t count(std::string_view check) const;
};

/// Audits a schedule against the task set, fleet and map. Throws
/// MalformedSchedule when it references unknown UAVs, tasks or positions.
ValidationReport validateSchedule(const Schedule& s, const TaskSet& tasks, std::span<const UavSpec> fleet,
                                  const MapGraph& map, const EnergyModel& energy);

/// Battery-seconds consumed by flights, hovers and task executions.
Seconds energyOf(const Schedule& s, const MapGraph& map, const EnergyModel& energy);

BatteryTrace batteryTrace(const Schedule& s, std::span<const UavSpec> fleet, const MapGraph& map,
                          const EnergyModel& energy);

/// JSON report {ok, energy, makespan, violations: [...]}.
std::string reportToJson(const ValidationReport& r);

}  // namespace uavsched

#endif  // UAVSCHED_VALIDATOR_HPP
