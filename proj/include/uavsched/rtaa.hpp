#ifndef UAVSCHED_RTAA_HPP
#define UAVSCHED_RTAA_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uavsched/domain.hpp"
#include "uavsched/fragments.hpp"
#include "uavsched/map.hpp"

namespace uavsched {

enum class ActionKind { FlyTo, PerformInspection, PerformMaterialHandling, Hover, WaitOnGround, Recharge };

std::string_view toString(ActionKind kind);
/// Throws ParseError.
ActionKind actionKindFromString(std::string_view name);

struct Action {
  ActionKind kind = ActionKind::Hover;
  TimeFragment span;
  std::string from;
  std::string to;
  std::optional<int> taskId;

  Seconds duration() const { return span.length(); }
  friend bool operator==(const Action&, const Action&) = default;
};

struct UavSchedule {
  int uavId = 0;
  std::vector<Action> actions;

  friend bool operator==(const UavSchedule&, const UavSchedule&) = default;
};

struct Schedule {
  std::vector<UavSchedule> uavs;
  Seconds reportedEnergy = 0;

  Seconds makespan() const;
  const UavSchedule* find(int uavId) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Schedule document: {uavs: [{id, actions: [...]}], energy, makespan}.
std::string serializeSchedule(const Schedule& s);
Schedule parseSchedule(std::string_view document);

/// Battery level in ticks: one battery-second equals `fullRechargeDuration`
/// ticks, so flying costs that many ticks per second and charging adds
/// `batteryCapacity` ticks per second. Every quantity stays integral.
using Ticks = std::int64_t;
inline constexpr Ticks kImpossible = std::numeric_limits<Ticks>::max() / 4;

struct GapOutcome {
  bool feasible = false;
  Ticks levelAfter = 0;
  Seconds energy = 0;  // airborne seconds spent in the gap
  bool recharged = false;
};

// Battery arithmetic for one UAV, plus the rule that fills the idle span
// between two duties. The idle span [t0, t1) runs from the end of one duty at
// `from` to the start of the next at `to`:
//   * at a station, wait on the ground (recharging when the wait allows at
//     least the minimum recharge) and take off just in time;
//   * elsewhere, detour to the nearest station if the time left after both
//     legs reaches the minimum recharge; otherwise hover and fly at the end.
// Each boundary must keep at least the flight time to the nearest station
// in the battery and never reach zero.
class BatteryModel {
 public:
  BatteryModel(const MapGraph& map, const EnergyModel& energy, Seconds capacity);

  Ticks capacity() const { return cap_; }
  Ticks perSecond() const { return burn_; }
  Ticks chargePerSecond() const { return charge_; }
  /// Smallest legal level at a boundary located at `p`.
  Ticks floorAt(PosIndex p) const;
  double toBatterySeconds(Ticks t) const { return static_cast<double>(t) / static_cast<double>(burn_); }

  /// Applies the idle-span rule; appends the filler actions to `emit` if given.
  GapOutcome crossGap(PosIndex from, PosIndex to, Seconds t0, Seconds t1, Ticks level,
                      std::vector<Action>* emit = nullptr) const;

  /// Minimal level at `from` (time t0) that crossGap() accepts with a level
  /// of at least `required` on arrival. kImpossible if none does.
  Ticks requiredBeforeGap(PosIndex from, PosIndex to, Seconds span, Ticks required) const;

 private:
  const MapGraph* map_;
  EnergyModel energy_;
  Ticks cap_;
  Ticks burn_;
  Ticks charge_;
};

// Immutable per-instance data shared by every sequence evaluation: resolved
// positions, the busiest-first ranking of start positions and the battery
// models of the fleet.
class SchedulingProblem {
 public:
  /// Throws UnknownPosition / ConfigError.
  SchedulingProblem(const TaskSet& tasks, std::vector<UavSpec> fleet, const MapGraph& map, EnergyModel energy);

  const TaskSet& tasks() const { return *tasks_; }
  const MapGraph& map() const { return *map_; }
  const EnergyModel& energy() const { return energy_; }
  const std::vector<UavSpec>& fleet() const { return fleet_; }
  const BatteryModel& battery(std::size_t slot) const { return batteries_[slot]; }

  PosIndex startPos(std::size_t task) const { return start_[task]; }
  PosIndex endPos(std::size_t task) const { return end_[task]; }
  /// Rank of the task's start position, 0 = busiest.
  int positionRank(std::size_t task) const { return rank_[task]; }
  /// Latest due date plus one full recharge cycle.
  Seconds horizonEnd() const { return horizonEnd_; }

 private:
  const TaskSet* tasks_;
  const MapGraph* map_;
  EnergyModel energy_;
  std::vector<UavSpec> fleet_;
  std::vector<BatteryModel> batteries_;
  std::vector<PosIndex> start_, end_;
  std::vector<int> rank_;
  Seconds horizonEnd_ = 0;
};

/// Sum of processing times of the tasks starting at each position, keyed by
/// position id.
std::vector<std::pair<std::string, Seconds>> projectedOccupationLoad(const TaskSet& tasks);

// One schedule construction: owns the occupation ledger and places tasks
// with the backward (latest start) and forward (earliest start) fragment
// placement rules.
class RestfulAssigner {
 public:
  explicit RestfulAssigner(const SchedulingProblem& problem);

  const OccupationLedger& ledger() const { return ledger_; }
  bool isPlaced(int taskId) const;

  /// UAV ids ordered by preference for `taskId`.
  std::vector<int> preferredUavs(int taskId) const;

  /// Latest feasible placement inside the trimmed window; false for
  /// windowless tasks or when nothing fits.
  bool bfpaAssign(int taskId);
  /// Earliest feasible placement left of scheduled tasks, then after the
  /// last task of each UAV.
  bool ffpaAssign(int taskId);

  /// Whether `taskId` could start at `start` on `uavId` given the current ledger.
  bool canPlace(int taskId, int uavId, Seconds start) const;

  /// Commits a placement chosen elsewhere; only occupation overlaps are
  /// checked (OverlapViolation).
  void place(int taskId, int uavId, Seconds start);

  /// Expands the placed tasks into full action lists. Throws InfeasibleEnergy.
  Schedule insertSupportActions() const;

 private:
  struct Frontier;
  struct Window {
    Seconds lo = 0;
    Seconds hi = 0;  // latest end
  };
  Window trimmedWindow(std::size_t task) const;
  std::vector<std::pair<Seconds, Seconds>> allowedStarts(std::size_t task, const Window& w) const;
  Frontier frontier(std::size_t slot) const;
  bool fits(std::size_t task, std::size_t slot, const Frontier& fr, std::size_t gapIndex, Seconds a) const;
  std::pair<Seconds, Seconds> gapRange(std::size_t task, std::size_t slot, std::size_t gapIndex) const;
  Seconds saturationStart(std::size_t task, std::size_t slot, std::size_t gapIndex) const;
  void commit(std::size_t task, std::size_t slot, Seconds start);
  std::vector<std::size_t> preferredSlots(std::size_t task) const;

  const SchedulingProblem* problem_;
  OccupationLedger ledger_;
  std::vector<bool> placed_;
};

/// Restful task assignment of one sequence; nullopt when the sequence yields
/// no feasible schedule. Throws InvalidSequence if `sequence` is not a
/// permutation of the task ids.
std::optional<Schedule> scheduleSequence(const SchedulingProblem& problem, std::span<const int> sequence);
std::optional<Schedule> scheduleSequence(std::span<const int> sequence, const TaskSet& tasks,
                                         std::span<const UavSpec> fleet, const MapGraph& map,
                                         const EnergyModel& energy);

}  // namespace uavsched

#endif  // UAVSCHED_RTAA_HPP
