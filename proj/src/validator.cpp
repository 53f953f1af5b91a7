#include "uavsched/validator.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "uavsched/errors.hpp"

namespace uavsched {

namespace {

bool isTask(ActionKind k) { return k == ActionKind::PerformInspection || k == ActionKind::PerformMaterialHandling; }
bool consumes(ActionKind k) { return k == ActionKind::FlyTo || k == ActionKind::Hover || isTask(k); }

const UavSpec& specOf(std::span<const UavSpec> fleet, int id) {
  for (const auto& u : fleet)
    if (u.id == id) return u;
  throw MalformedSchedule("schedule names unknown UAV " + std::to_string(id));
}

PosIndex resolve(const MapGraph& map, const std::string& id) {
  auto p = map.find(id);
  if (!p) throw MalformedSchedule("schedule names unknown position '" + id + "'");
  return *p;
}

void checkReferences(const Schedule& s, const TaskSet* tasks, std::span<const UavSpec> fleet, const MapGraph& map) {
  std::set<int> seen;
  for (const auto& u : s.uavs) {
    specOf(fleet, u.uavId);
    if (!seen.insert(u.uavId).second) throw MalformedSchedule("UAV " + std::to_string(u.uavId) + " listed twice");
    for (const auto& a : u.actions) {
      resolve(map, a.from);
      resolve(map, a.to);
      if (a.span.end < a.span.start) throw MalformedSchedule("action ends before it starts");
      if (isTask(a.kind)) {
        if (!a.taskId) throw MalformedSchedule("task action without a task id");
        if (tasks && !tasks->contains(*a.taskId))
          throw MalformedSchedule("schedule names unknown task " + std::to_string(*a.taskId));
      }
    }
  }
}

// Walks one UAV's actions from a full battery and reports every boundary.
template <typename OnBoundary>
void simulate(const UavSchedule& u, const UavSpec& spec, const EnergyModel& energy, OnBoundary&& onBoundary,
              std::vector<double>* afterTask) {
  const Level cap(spec.batteryCapacity);
  const Level rate(spec.batteryCapacity, energy.fullRechargeDuration);
  Level level = cap;
  for (const auto& a : u.actions) {
    onBoundary(a.span.start, level, a.from, a);
    const Seconds dur = a.span.length();
    if (consumes(a.kind))
      level -= dur;
    else if (a.kind == ActionKind::Recharge)
      level = std::min(cap, level + rate * dur);
    onBoundary(a.span.end, level, a.to, a);
    if (afterTask && isTask(a.kind)) afterTask->push_back(toDouble(level));
  }
}

}  // namespace

std::size_t ValidationReport::count(std::string_view check) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.check == check; }));
}

Seconds energyOf(const Schedule& s, const MapGraph& map, const EnergyModel&) {
  Seconds e = 0;
  for (const auto& u : s.uavs)
    for (const auto& a : u.actions) {
      resolve(map, a.from);
      resolve(map, a.to);
      if (a.span.end < a.span.start) throw MalformedSchedule("action ends before it starts");
      if (consumes(a.kind)) e += a.span.length();
    }
  return e;
}

BatteryTrace batteryTrace(const Schedule& s, std::span<const UavSpec> fleet, const MapGraph& map,
                          const EnergyModel& energy) {
  checkReferences(s, nullptr, fleet, map);
  BatteryTrace out;
  for (const auto& spec : fleet) {
    UavBatteryTrace t{spec.id, {}, {}};
    t.points.push_back({0, Level(spec.batteryCapacity), spec.initialPosition});
    if (const auto* u = s.find(spec.id)) {
      simulate(
          *u, spec, energy,
          [&](Seconds time, const Level& l, const std::string& pos, const Action&) {
            const auto& last = t.points.back();
            if (last.time != time || last.level != l || last.position != pos) t.points.push_back({time, l, pos});
          },
          &t.afterTask);
    }
    out.uavs.push_back(std::move(t));
  }
  return out;
}

ValidationReport validateSchedule(const Schedule& s, const TaskSet& tasks, std::span<const UavSpec> fleet,
                                  const MapGraph& map, const EnergyModel& energy) {
  checkReferences(s, &tasks, fleet, map);
  ValidationReport r;
  auto flag = [&](std::string check, std::optional<int> uav, std::optional<int> task, std::string pos,
                  std::string detail) {
    r.violations.push_back({std::move(check), uav, task, std::move(pos), std::move(detail)});
  };

  struct Execution {
    int uav;
    TimeFragment span;
  };
  std::map<int, std::vector<Execution>> executions;
  struct Hold {
    TimeFragment span;
    int task;
    int uav;
  };
  std::map<PosIndex, std::vector<Hold>> holds;

  for (const auto& u : s.uavs) {
    const auto& spec = specOf(fleet, u.uavId);
    std::string where = spec.initialPosition;
    Seconds clock = 0;
    for (const auto& a : u.actions) {
      const auto from = resolve(map, a.from);
      const auto to = resolve(map, a.to);
      if (a.span.start < clock)
        flag("C5", u.uavId, a.taskId, a.from, "action starts at " + std::to_string(a.span.start) +
                                                  " before the previous one ends at " + std::to_string(clock));
      else if (a.span.start > clock)
        flag("Chain", u.uavId, a.taskId, a.from, "idle hole [" + std::to_string(clock) + "," +
                                                     std::to_string(a.span.start) + ") between actions");
      if (a.from != where)
        flag("Chain", u.uavId, a.taskId, a.from, "action starts at " + a.from + " but the UAV is at " + where);

      switch (a.kind) {
        case ActionKind::FlyTo: {
          const auto t = map.travel(from, to);
          if (from == to || t >= kUnreachable)
            flag("Route", u.uavId, {}, a.from, "no flight route " + a.from + "->" + a.to);
          else if (a.span.length() != t)
            flag("Route", u.uavId, {}, a.from, "flight " + a.from + "->" + a.to + " lasts " +
                                                   std::to_string(a.span.length()) + ", route time " + std::to_string(t));
          break;
        }
        case ActionKind::Hover:
        case ActionKind::WaitOnGround:
        case ActionKind::Recharge:
          if (from != to) flag("Chain", u.uavId, {}, a.from, std::string(toString(a.kind)) + " changes position");
          if (a.kind != ActionKind::Hover && !map.isStation(from))
            flag("C6", u.uavId, {}, a.from, std::string(toString(a.kind)) + " away from a recharge station");
          if (a.kind == ActionKind::Recharge && a.span.length() < energy.minRechargeFragment)
            flag("Eq29", u.uavId, {}, a.from, "recharge of " + std::to_string(a.span.length()) + " s");
          break;
        case ActionKind::PerformInspection:
        case ActionKind::PerformMaterialHandling: {
          const auto& task = tasks.byId(*a.taskId);
          executions[task.id].push_back({u.uavId, a.span});
          if (a.from != task.startPos || a.to != task.endPos)
            flag("C1", u.uavId, task.id, a.from, "task executed between the wrong positions");
          if ((a.kind == ActionKind::PerformInspection) != (task.kind() == TaskKind::Inspection))
            flag("C1", u.uavId, task.id, a.from, "action kind does not match the task");
          if (a.span.length() != task.processingTime)
            flag("Eq1", u.uavId, task.id, a.from, "execution lasts " + std::to_string(a.span.length()) +
                                                      ", processing time " + std::to_string(task.processingTime));
          if (task.hasTimeWindow && (a.span.start < task.releaseDate || a.span.end > task.dueDate))
            flag("C2", u.uavId, task.id, a.from, "executes in [" + std::to_string(a.span.start) + "," +
                                                     std::to_string(a.span.end) + ") outside window [" +
                                                     std::to_string(task.releaseDate) + "," +
                                                     std::to_string(task.dueDate) + "]");
          for (const auto& o : taskOccupation(map, energy, from, to, a.span.start, a.span.end))
            holds[o.position].push_back({o.span, task.id, u.uavId});
          break;
        }
      }
      where = a.to;
      clock = std::max(clock, a.span.end);
    }

    simulate(
        u, spec, energy,
        [&](Seconds time, const Level& level, const std::string& pos, const Action& a) {
          const Level reserve(map.reserve(resolve(map, pos)));
          if (level <= 0 || level < reserve)
            flag("C7", u.uavId, a.taskId, pos, "battery " + std::to_string(toDouble(level)) + " at t=" +
                                                   std::to_string(time) + " below reserve " +
                                                   std::to_string(toDouble(reserve)));
        },
        nullptr);
  }

  for (const auto& t : tasks.tasks()) {
    auto it = executions.find(t.id);
    const std::size_t n = it == executions.end() ? 0 : it->second.size();
    if (n != 1) flag("C1", {}, t.id, "", "task executed " + std::to_string(n) + " times");
  }

  for (auto& [pos, list] : holds) {
    std::sort(list.begin(), list.end(), [](const Hold& a, const Hold& b) { return a.span.start < b.span.start; });
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size() && list[j].span.start < list[i].span.end; ++j)
        if (list[i].span.overlaps(list[j].span))
          flag("C4", list[j].uav, list[j].task, map.id(pos),
               "tasks " + std::to_string(list[i].task) + " and " + std::to_string(list[j].task) +
                   " occupy the position at the same time");
  }

  for (const auto& t : tasks.tasks()) {
    auto it = executions.find(t.id);
    if (it == executions.end()) continue;
    for (int p : t.predecessors) {
      auto pit = executions.find(p);
      if (pit == executions.end()) continue;
      for (const auto& e : it->second)
        for (const auto& pe : pit->second)
          if (e.span.start < pe.span.end)
            flag("C9", e.uav, t.id, "", "starts at " + std::to_string(e.span.start) + " before predecessor " +
                                            std::to_string(p) + " ends at " + std::to_string(pe.span.end));
    }
  }

  // C3 (unlimited station capacity), C8 (full battery at the start; the
  // simulation starts there) and C10 (acyclic, non-redundant precedence,
  // enforced when the task set is built) hold by construction.

  r.energy = energyOf(s, map, energy);
  r.makespan = s.makespan();
  r.trace = batteryTrace(s, fleet, map, energy);
  r.ok = r.violations.empty();
  return r;
}

std::string reportToJson(const ValidationReport& r) {
  nlohmann::ordered_json doc;
  doc["ok"] = r.ok;
  doc["energy"] = r.energy;
  doc["makespan"] = r.makespan;
  auto& vs = doc["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : r.violations) {
    nlohmann::ordered_json j;
    j["check"] = v.check;
    if (v.uavId) j["uav"] = *v.uavId;
    if (v.taskId) j["task"] = *v.taskId;
    if (!v.position.empty()) j["position"] = v.position;
    j["detail"] = v.detail;
    vs.push_back(std::move(j));
  }
  return doc.dump(2);
}

}  // namespace uavsched
