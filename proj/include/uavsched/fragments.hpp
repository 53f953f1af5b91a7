#ifndef UAVSCHED_FRAGMENTS_HPP
#define UAVSCHED_FRAGMENTS_HPP

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "uavsched/domain.hpp"
#include "uavsched/map.hpp"

namespace uavsched {

/// Half-open busy interval [start, end); abutting fragments do not conflict.
struct TimeFragment {
  Seconds start = 0;
  Seconds end = 0;

  Seconds length() const { return end - start; }
  bool empty() const { return end <= start; }
  bool overlaps(const TimeFragment& o) const { return start < o.end && o.start < end; }
  bool contains(const TimeFragment& o) const { return start <= o.start && o.end <= end; }

  friend bool operator==(const TimeFragment&, const TimeFragment&) = default;
};

using FragmentList = std::vector<TimeFragment>;

/// Maximal pieces of `window` that avoid every fragment of `occupied`
/// (which must be sorted and disjoint), in ascending order.
FragmentList trimOccupiedTimeRange(TimeFragment window, std::span<const TimeFragment> occupied);

/// True if `f` overlaps a fragment of the sorted, disjoint list.
bool overlapsAny(const FragmentList& sorted, const TimeFragment& f);

struct PositionOccupation {
  PosIndex position = -1;
  TimeFragment span;

  friend bool operator==(const PositionOccupation&, const PositionOccupation&) = default;
};

/// Positions a task blocks while executing at [start, end). An inspection
/// holds its position throughout; a material-handling task holds its start
/// position while loading and its end position while unloading. Recharge
/// stations are never listed.
std::vector<PositionOccupation> taskOccupation(const MapGraph& map, const EnergyModel& energy, PosIndex startPos,
                                               PosIndex endPos, Seconds start, Seconds end);

struct TaskPlacement {
  int taskId = 0;
  Seconds start = 0;
  Seconds end = 0;
  PosIndex startPos = -1;
  PosIndex endPos = -1;
  std::vector<PositionOccupation> occupation;
};

enum class UavActivity { Flight, Execution };

// One UAV occupation fragment. Flights are the connecting legs into a task
// (arriving exactly at its start); `taskId` names the task served.
struct UavFragment {
  TimeFragment span;
  UavActivity activity = UavActivity::Execution;
  int taskId = 0;
  PosIndex from = -1;
  PosIndex to = -1;

  friend bool operator==(const UavFragment&, const UavFragment&) = default;
};

// Position (POF) and UAV (UOF) occupation records of one schedule
// construction. POF only ever grows. A UAV's UOF is rebuilt from its task
// list on every commit, so a connecting flight that a new task splits is
// replaced by the two legs around it.
class OccupationLedger {
 public:
  OccupationLedger(const MapGraph& map, std::span<const UavSpec> fleet, const EnergyModel& energy);

  const MapGraph& map() const { return *map_; }
  const EnergyModel& energy() const { return energy_; }

  std::size_t uavCount() const { return uavIds_.size(); }
  int uavId(std::size_t slot) const { return uavIds_[slot]; }
  /// Throws UnknownUav.
  std::size_t slotOf(int uavId) const;
  PosIndex initialPosition(std::size_t slot) const { return initial_[slot]; }

  const FragmentList& positionFragments(PosIndex p) const { return pof_[static_cast<std::size_t>(p)]; }
  const std::vector<UavFragment>& uavFragments(std::size_t slot) const { return uof_[slot]; }
  const std::vector<TaskPlacement>& placements(std::size_t slot) const { return placements_[slot]; }
  /// Total occupied time of the UAV (executions plus connecting flights).
  Seconds workload(std::size_t slot) const { return workload_[slot]; }

  std::optional<std::size_t> uavSlotOfTask(int taskId) const;
  const TaskPlacement* placementOf(int taskId) const;

  /// Atomically records a task placement. Throws OverlapViolation if a
  /// position fragment or the revised UAV fragments would overlap; the
  /// ledger is unchanged in that case.
  void commitTaskFragments(std::size_t slot, TaskPlacement placement);

 private:
  const MapGraph* map_;
  EnergyModel energy_;
  std::vector<int> uavIds_;
  std::vector<PosIndex> initial_;
  std::vector<FragmentList> pof_;
  std::vector<std::vector<UavFragment>> uof_;
  std::vector<std::vector<TaskPlacement>> placements_;
  std::vector<Seconds> workload_;
  std::unordered_map<int, std::size_t> taskSlot_;
};

/// Gaps of the UAV's occupation fragments inside `horizon`, ascending.
FragmentList unallocatedTimeFragments(const OccupationLedger& ledger, int uavId, TimeFragment horizon);

}  // namespace uavsched

#endif  // UAVSCHED_FRAGMENTS_HPP
