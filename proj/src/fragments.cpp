#include "uavsched/fragments.hpp"

#include <algorithm>
#include <string>

#include "uavsched/errors.hpp"

namespace uavsched {

FragmentList trimOccupiedTimeRange(TimeFragment window, std::span<const TimeFragment> occupied) {
  FragmentList out;
  if (window.empty()) return out;
  Seconds cursor = window.start;
  // First fragment that ends after the window start.
  auto it = std::upper_bound(occupied.begin(), occupied.end(), window.start,
                             [](Seconds t, const TimeFragment& f) { return t < f.end; });
  for (; it != occupied.end() && it->start < window.end; ++it) {
    if (it->start > cursor) out.push_back({cursor, it->start});
    cursor = std::max(cursor, it->end);
  }
  if (cursor < window.end) out.push_back({cursor, window.end});
  return out;
}

bool overlapsAny(const FragmentList& sorted, const TimeFragment& f) {
  if (f.empty()) return false;
  auto it = std::upper_bound(sorted.begin(), sorted.end(), f.start,
                             [](Seconds t, const TimeFragment& x) { return t < x.end; });
  return it != sorted.end() && it->start < f.end;
}

std::vector<PositionOccupation> taskOccupation(const MapGraph& map, const EnergyModel& energy, PosIndex startPos,
                                               PosIndex endPos, Seconds start, Seconds end) {
  std::vector<PositionOccupation> out;
  if (startPos == endPos) {
    if (!map.isStation(startPos)) out.push_back({startPos, {start, end}});
    return out;
  }
  const auto portion = energy.handlingPortion(end - start);
  if (!map.isStation(startPos)) out.push_back({startPos, {start, start + portion}});
  if (!map.isStation(endPos)) out.push_back({endPos, {end - portion, end}});
  return out;
}

OccupationLedger::OccupationLedger(const MapGraph& map, std::span<const UavSpec> fleet, const EnergyModel& energy)
    : map_(&map), energy_(energy), pof_(map.size()) {
  for (const auto& u : fleet) {
    uavIds_.push_back(u.id);
    initial_.push_back(map.index(u.initialPosition));
  }
  uof_.resize(fleet.size());
  placements_.resize(fleet.size());
  workload_.assign(fleet.size(), 0);
}

std::size_t OccupationLedger::slotOf(int uavId) const {
  auto it = std::find(uavIds_.begin(), uavIds_.end(), uavId);
  if (it == uavIds_.end()) throw UnknownUav("unknown UAV " + std::to_string(uavId));
  return static_cast<std::size_t>(it - uavIds_.begin());
}

std::optional<std::size_t> OccupationLedger::uavSlotOfTask(int taskId) const {
  auto it = taskSlot_.find(taskId);
  if (it == taskSlot_.end()) return std::nullopt;
  return it->second;
}

const TaskPlacement* OccupationLedger::placementOf(int taskId) const {
  auto slot = uavSlotOfTask(taskId);
  if (!slot) return nullptr;
  for (const auto& p : placements_[*slot])
    if (p.taskId == taskId) return &p;
  return nullptr;
}

void OccupationLedger::commitTaskFragments(std::size_t slot, TaskPlacement placement) {
  if (slot >= uavIds_.size()) throw UnknownUav("unknown UAV slot " + std::to_string(slot));
  if (placement.end <= placement.start)
    throw OverlapViolation("task " + std::to_string(placement.taskId) + " has an empty execution fragment");
  if (taskSlot_.contains(placement.taskId))
    throw OverlapViolation("task " + std::to_string(placement.taskId) + " is already placed");

  for (const auto& occ : placement.occupation) {
    if (overlapsAny(pof_[static_cast<std::size_t>(occ.position)], occ.span))
      throw OverlapViolation("position " + map_->id(occ.position) + " is occupied during [" +
                             std::to_string(occ.span.start) + "," + std::to_string(occ.span.end) + ")");
  }

  auto tasks = placements_[slot];
  auto at = std::upper_bound(tasks.begin(), tasks.end(), placement.start,
                             [](Seconds s, const TaskPlacement& p) { return s < p.start; });
  tasks.insert(at, placement);

  std::vector<UavFragment> fragments;
  Seconds workload = 0;
  Seconds lastEnd = 0;
  PosIndex lastPos = initial_[slot];
  for (const auto& p : tasks) {
    const auto fly = map_->travel(lastPos, p.startPos);
    if (fly >= kUnreachable)
      throw OverlapViolation("no route from " + map_->id(lastPos) + " to " + map_->id(p.startPos));
    if (p.start - fly < lastEnd)
      throw OverlapViolation("UAV " + std::to_string(uavIds_[slot]) + " cannot reach task " +
                             std::to_string(p.taskId) + " in time");
    if (fly > 0) fragments.push_back({{p.start - fly, p.start}, UavActivity::Flight, p.taskId, lastPos, p.startPos});
    fragments.push_back({{p.start, p.end}, UavActivity::Execution, p.taskId, p.startPos, p.endPos});
    workload += fly + (p.end - p.start);
    lastEnd = p.end;
    lastPos = p.endPos;
  }

  for (const auto& occ : placement.occupation) {
    auto& list = pof_[static_cast<std::size_t>(occ.position)];
    list.insert(std::upper_bound(list.begin(), list.end(), occ.span.start,
                                 [](Seconds s, const TimeFragment& f) { return s < f.start; }),
                occ.span);
  }
  placements_[slot] = std::move(tasks);
  uof_[slot] = std::move(fragments);
  workload_[slot] = workload;
  taskSlot_.emplace(placement.taskId, slot);
}

FragmentList unallocatedTimeFragments(const OccupationLedger& ledger, int uavId, TimeFragment horizon) {
  const auto slot = ledger.slotOf(uavId);
  FragmentList busy;
  for (const auto& f : ledger.uavFragments(slot)) busy.push_back(f.span);
  return trimOccupiedTimeRange(horizon, busy);
}

}  // namespace uavsched
