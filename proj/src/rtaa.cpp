#include "uavsched/rtaa.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <json.hpp>

#include "uavsched/errors.hpp"

namespace uavsched {

namespace {

constexpr Seconds kFar = kUnreachable / 2;

constexpr std::pair<ActionKind, std::string_view> kKindNames[] = {
    {ActionKind::FlyTo, "FlyTo"},
    {ActionKind::PerformInspection, "PerformInspection"},
    {ActionKind::PerformMaterialHandling, "PerformMaterialHandling"},
    {ActionKind::Hover, "Hover"},
    {ActionKind::WaitOnGround, "WaitOnGround"},
    {ActionKind::Recharge, "Recharge"},
};

using Interval = std::pair<Seconds, Seconds>;  // inclusive

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const auto lo = std::max(a[i].first, b[j].first);
    const auto hi = std::min(a[i].second, b[j].second);
    if (lo <= hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second)
      ++i;
    else
      ++j;
  }
  return out;
}

}  // namespace

std::string_view toString(ActionKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

ActionKind actionKindFromString(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw ParseError("unknown action kind '" + std::string(name) + "'");
}

Seconds Schedule::makespan() const {
  Seconds m = 0;
  for (const auto& u : uavs)
    if (!u.actions.empty()) m = std::max(m, u.actions.back().span.end);
  return m;
}

const UavSchedule* Schedule::find(int uavId) const {
  for (const auto& u : uavs)
    if (u.uavId == uavId) return &u;
  return nullptr;
}

std::string serializeSchedule(const Schedule& s) {
  nlohmann::ordered_json doc;
  auto& uavs = doc["uavs"] = nlohmann::ordered_json::array();
  for (const auto& u : s.uavs) {
    nlohmann::ordered_json ju;
    ju["id"] = u.uavId;
    auto& acts = ju["actions"] = nlohmann::ordered_json::array();
    for (const auto& a : u.actions) {
      nlohmann::ordered_json ja;
      ja["kind"] = std::string(toString(a.kind));
      ja["start"] = a.span.start;
      ja["end"] = a.span.end;
      ja["from"] = a.from;
      ja["to"] = a.to;
      if (a.taskId) ja["task"] = *a.taskId;
      acts.push_back(std::move(ja));
    }
    uavs.push_back(std::move(ju));
  }
  doc["energy"] = s.reportedEnergy;
  doc["makespan"] = s.makespan();
  return doc.dump(2);
}

Schedule parseSchedule(std::string_view document) {
  Schedule s;
  try {
    const auto doc = nlohmann::json::parse(document);
    for (const auto& ju : doc.at("uavs")) {
      UavSchedule u;
      u.uavId = ju.at("id").get<int>();
      for (const auto& ja : ju.at("actions")) {
        Action a;
        a.kind = actionKindFromString(ja.at("kind").get<std::string>());
        a.span = {ja.at("start").get<Seconds>(), ja.at("end").get<Seconds>()};
        if (ja.contains("from")) a.from = ja.at("from").get<std::string>();
        if (ja.contains("to")) a.to = ja.at("to").get<std::string>();
        if (a.from.empty()) a.from = a.to;
        if (a.to.empty()) a.to = a.from;
        if (ja.contains("task") && !ja.at("task").is_null()) a.taskId = ja.at("task").get<int>();
        u.actions.push_back(std::move(a));
      }
      s.uavs.push_back(std::move(u));
    }
    if (doc.contains("energy")) s.reportedEnergy = doc.at("energy").get<Seconds>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule document: ") + e.what());
  }
  return s;
}

// ---------------------------------------------------------------- battery

BatteryModel::BatteryModel(const MapGraph& map, const EnergyModel& energy, Seconds capacity)
    : map_(&map), energy_(energy), cap_(capacity * energy.fullRechargeDuration),
      burn_(energy.fullRechargeDuration), charge_(capacity) {}

Ticks BatteryModel::floorAt(PosIndex p) const {
  return std::max<Ticks>(1, map_->reserve(p) * burn_);
}

GapOutcome BatteryModel::crossGap(PosIndex from, PosIndex to, Seconds t0, Seconds t1, Ticks level,
                                  std::vector<Action>* emit) const {
  GapOutcome out;
  const auto& m = *map_;
  const Seconds minR = energy_.minRechargeFragment;
  const Seconds d = m.travel(from, to);
  const Seconds span = t1 - t0;
  if (d >= kUnreachable || span < d || level < floorAt(from)) return out;

  std::vector<Action> acts;
  auto fly = [&](PosIndex a, PosIndex b, Seconds s, Seconds len) {
    if (emit && len > 0) acts.push_back({ActionKind::FlyTo, {s, s + len}, m.id(a), m.id(b), {}});
  };
  auto stay = [&](ActionKind k, PosIndex p, Seconds s, Seconds e) {
    if (emit && e > s) acts.push_back({k, {s, e}, m.id(p), m.id(p), {}});
  };
  auto timeToFull = [&](Ticks l) { return (cap_ - l + charge_ - 1) / charge_; };

  Ticks arrive = 0;
  if (m.isStation(from)) {
    const Seconds usable = span - d;
    Ticks l = level;
    if (usable >= minR && level < cap_) {
      const Seconds r = std::max(minR, std::min(usable, timeToFull(level)));
      stay(ActionKind::Recharge, from, t0, t0 + r);
      stay(ActionKind::WaitOnGround, from, t0 + r, t1 - d);
      l = std::min(cap_, level + charge_ * usable);
      out.recharged = true;
    } else {
      stay(ActionKind::WaitOnGround, from, t0, t1 - d);
    }
    fly(from, to, t1 - d, d);
    arrive = l - d * burn_;
    out.energy = d;
  } else {
    const auto [h, c1] = *m.nearestStation(from);
    const Seconds c2 = m.travel(h, to);
    const Seconds usable = c2 < kUnreachable ? span - c1 - c2 : -1;
    if (usable >= minR) {
      const Ticks atStation = level - c1 * burn_;
      if (atStation < 1) return out;
      const Seconds r = std::max(minR, std::min(usable, timeToFull(atStation)));
      fly(from, h, t0, c1);
      stay(ActionKind::Recharge, h, t0 + c1, t0 + c1 + r);
      stay(ActionKind::WaitOnGround, h, t0 + c1 + r, t1 - c2);
      fly(h, to, t1 - c2, c2);
      arrive = std::min(cap_, atStation + charge_ * usable) - c2 * burn_;
      out.energy = c1 + c2;
      out.recharged = true;
    } else {
      const Seconds hover = span - d;
      const Ticks afterHover = level - hover * burn_;
      if (hover > 0 && afterHover < floorAt(from)) return out;
      stay(ActionKind::Hover, from, t0, t0 + hover);
      fly(from, to, t1 - d, d);
      arrive = afterHover - d * burn_;
      out.energy = span;
    }
  }
  if (arrive < floorAt(to)) return out;
  out.feasible = true;
  out.levelAfter = arrive;
  if (emit) emit->insert(emit->end(), acts.begin(), acts.end());
  return out;
}

Ticks BatteryModel::requiredBeforeGap(PosIndex from, PosIndex to, Seconds span, Ticks required) const {
  const auto& m = *map_;
  const Seconds minR = energy_.minRechargeFragment;
  const Seconds d = m.travel(from, to);
  if (d >= kUnreachable || span < d || required >= kImpossible) return kImpossible;
  required = std::max(required, floorAt(to));
  const Ticks floor = floorAt(from);
  Ticks need = 0;
  if (m.isStation(from)) {
    const Seconds usable = span - d;
    const Ticks takeoff = required + d * burn_;
    if (takeoff > cap_) return kImpossible;
    need = usable >= minR ? std::max(floor, takeoff - charge_ * usable) : std::max(floor, takeoff);
  } else {
    const auto [h, c1] = *m.nearestStation(from);
    const Seconds c2 = m.travel(h, to);
    const Seconds usable = c2 < kUnreachable ? span - c1 - c2 : -1;
    if (usable >= minR) {
      const Ticks takeoff = required + c2 * burn_;
      if (takeoff > cap_) return kImpossible;
      need = std::max(floor, std::max<Ticks>(1, takeoff - charge_ * usable) + c1 * burn_);
    } else {
      const Seconds hover = span - d;
      need = std::max(hover > 0 ? floor + hover * burn_ : floor, required + span * burn_);
    }
  }
  return need > cap_ ? kImpossible : need;
}

// ---------------------------------------------------------------- problem

std::vector<std::pair<std::string, Seconds>> projectedOccupationLoad(const TaskSet& tasks) {
  std::map<std::string, Seconds> load;
  for (const auto& t : tasks.tasks()) load[t.startPos] += t.processingTime;
  return {load.begin(), load.end()};
}

SchedulingProblem::SchedulingProblem(const TaskSet& tasks, std::vector<UavSpec> fleet, const MapGraph& map,
                                     EnergyModel energy)
    : tasks_(&tasks), map_(&map), energy_(energy), fleet_(std::move(fleet)) {
  validateEnergyModel(energy_);
  validateFleet(fleet_, map);
  if (fleet_.empty() && !tasks.empty()) throw ConfigError("fleet is empty");
  for (const auto& u : fleet_) batteries_.emplace_back(map, energy_, u.batteryCapacity);

  const auto n = tasks.size();
  Seconds latestDue = 0;
  for (std::size_t i = 0; i < n; ++i) {
    start_.push_back(map.index(tasks[i].startPos));
    end_.push_back(map.index(tasks[i].endPos));
    if (map.travel(start_[i], end_[i]) >= kUnreachable)
      throw ConfigError("task " + std::to_string(tasks[i].id) + " has no route from start to end position");
    if (tasks[i].hasTimeWindow) latestDue = std::max(latestDue, tasks[i].dueDate);
  }
  horizonEnd_ = latestDue + energy_.fullRechargeDuration;

  auto load = projectedOccupationLoad(tasks);
  std::stable_sort(load.begin(), load.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::map<std::string, int> rankOf;
  for (std::size_t r = 0; r < load.size(); ++r) rankOf[load[r].first] = static_cast<int>(r);
  for (std::size_t i = 0; i < n; ++i) rank_.push_back(rankOf.at(tasks[i].startPos));
}

// ---------------------------------------------------------------- assigner

// Battery state of one UAV's current task list: the level after each
// placement (index 0 is the initial full battery at time 0) and, walking
// backwards, the least level each placement needs at its start.
struct RestfulAssigner::Frontier {
  std::vector<Ticks> levelAfter;
  std::vector<Ticks> requiredAtStart;
};

RestfulAssigner::RestfulAssigner(const SchedulingProblem& problem)
    : problem_(&problem), ledger_(problem.map(), problem.fleet(), problem.energy()),
      placed_(problem.tasks().size(), false) {}

bool RestfulAssigner::isPlaced(int taskId) const { return placed_[problem_->tasks().indexOf(taskId)]; }

RestfulAssigner::Window RestfulAssigner::trimmedWindow(std::size_t task) const {
  const auto& ts = problem_->tasks();
  const auto& t = ts[task];
  Window w{t.hasTimeWindow ? t.releaseDate : 0, t.hasTimeWindow ? t.dueDate : kFar};
  for (auto p : ts.cumulativePredecessors(task))
    if (placed_[p]) w.lo = std::max(w.lo, ledger_.placementOf(ts[p].id)->end);
  for (auto s : ts.cumulativeSuccessors(task))
    if (placed_[s]) w.hi = std::min(w.hi, ledger_.placementOf(ts[s].id)->start);
  return w;
}

std::vector<Interval> RestfulAssigner::allowedStarts(std::size_t task, const Window& w) const {
  const Seconds dur = problem_->tasks()[task].processingTime;
  const Seconds lastStart = w.hi - dur;
  if (lastStart < w.lo) return {};
  std::vector<Interval> cur{{w.lo, lastStart}};
  const auto pattern = taskOccupation(problem_->map(), problem_->energy(), problem_->startPos(task),
                                      problem_->endPos(task), 0, dur);
  for (const auto& occ : pattern) {
    const Seconds off = occ.span.start;
    const Seconds len = occ.span.length();
    std::vector<Interval> ok;
    for (const auto& f : trimOccupiedTimeRange({w.lo + off, lastStart + off + len}, ledger_.positionFragments(occ.position)))
      if (f.length() >= len) ok.emplace_back(f.start - off, f.end - len - off);
    cur = intersect(cur, ok);
    if (cur.empty()) break;
  }
  return cur;
}

RestfulAssigner::Frontier RestfulAssigner::frontier(std::size_t slot) const {
  const auto& bat = problem_->battery(slot);
  const auto& ps = ledger_.placements(slot);
  const auto& ts = problem_->tasks();
  Frontier fr;
  fr.levelAfter.reserve(ps.size() + 1);
  fr.levelAfter.push_back(bat.capacity());
  PosIndex pos = ledger_.initialPosition(slot);
  Seconds t = 0;
  for (const auto& p : ps) {
    const auto g = bat.crossGap(pos, p.startPos, t, p.start, fr.levelAfter.back());
    const auto w = ts.byId(p.taskId).processingTime;
    fr.levelAfter.push_back(g.feasible ? g.levelAfter - w * bat.perSecond() : -kImpossible);
    pos = p.endPos;
    t = p.end;
  }
  fr.requiredAtStart.assign(ps.size(), kImpossible);
  Ticks after = 0;
  for (std::size_t j = ps.size(); j-- > 0;) {
    const auto& p = ps[j];
    const Ticks endNeed = j + 1 == ps.size()
                              ? bat.floorAt(p.endPos)
                              : bat.requiredBeforeGap(p.endPos, ps[j + 1].startPos, ps[j + 1].start - p.end, after);
    const auto w = ts.byId(p.taskId).processingTime;
    after = endNeed >= kImpossible ? kImpossible : std::max(bat.floorAt(p.startPos), endNeed + w * bat.perSecond());
    fr.requiredAtStart[j] = after;
  }
  return fr;
}

std::pair<Seconds, Seconds> RestfulAssigner::gapRange(std::size_t task, std::size_t slot, std::size_t gapIndex) const {
  const auto& m = problem_->map();
  const auto& ps = ledger_.placements(slot);
  const PosIndex prevPos = gapIndex == 0 ? ledger_.initialPosition(slot) : ps[gapIndex - 1].endPos;
  const Seconds prevEnd = gapIndex == 0 ? 0 : ps[gapIndex - 1].end;
  const Seconds in = m.travel(prevPos, problem_->startPos(task));
  if (in >= kUnreachable) return {1, 0};
  Seconds hi = kFar;
  if (gapIndex < ps.size()) {
    const Seconds out = m.travel(problem_->endPos(task), ps[gapIndex].startPos);
    if (out >= kUnreachable) return {1, 0};
    hi = ps[gapIndex].start - out - problem_->tasks()[task].processingTime;
  }
  return {prevEnd + in, hi};
}

Seconds RestfulAssigner::saturationStart(std::size_t task, std::size_t slot, std::size_t gapIndex) const {
  // Past this start the idle span before the task always allows a full
  // recharge, so the battery outcome no longer depends on the start time.
  const auto& m = problem_->map();
  const auto& ps = ledger_.placements(slot);
  const PosIndex prevPos = gapIndex == 0 ? ledger_.initialPosition(slot) : ps[gapIndex - 1].endPos;
  const Seconds prevEnd = gapIndex == 0 ? 0 : ps[gapIndex - 1].end;
  const auto& e = problem_->energy();
  const Seconds charge = std::max(e.minRechargeFragment, e.fullRechargeDuration);
  const PosIndex s = problem_->startPos(task);
  if (m.isStation(prevPos)) return prevEnd + m.travel(prevPos, s) + charge;
  const auto [h, c1] = *m.nearestStation(prevPos);
  const Seconds c2 = m.travel(h, s);
  return prevEnd + c1 + std::max(c2, m.travel(prevPos, s)) + charge;
}

bool RestfulAssigner::fits(std::size_t task, std::size_t slot, const Frontier& fr, std::size_t gapIndex,
                           Seconds a) const {
  const auto& bat = problem_->battery(slot);
  const auto& ps = ledger_.placements(slot);
  const PosIndex prevPos = gapIndex == 0 ? ledger_.initialPosition(slot) : ps[gapIndex - 1].endPos;
  const Seconds prevEnd = gapIndex == 0 ? 0 : ps[gapIndex - 1].end;
  const Ticks level = fr.levelAfter[gapIndex];
  if (level < 1) return false;
  const PosIndex s = problem_->startPos(task);
  const PosIndex e = problem_->endPos(task);
  const Seconds w = problem_->tasks()[task].processingTime;

  const auto in = bat.crossGap(prevPos, s, prevEnd, a, level);
  if (!in.feasible) return false;
  const Ticks done = in.levelAfter - w * bat.perSecond();
  if (done < bat.floorAt(e)) return false;
  if (gapIndex == ps.size()) return true;
  const auto& next = ps[gapIndex];
  const auto out = bat.crossGap(e, next.startPos, a + w, next.start, done);
  return out.feasible && out.levelAfter >= fr.requiredAtStart[gapIndex];
}

void RestfulAssigner::commit(std::size_t task, std::size_t slot, Seconds start) {
  const auto& t = problem_->tasks()[task];
  TaskPlacement p{t.id, start, start + t.processingTime, problem_->startPos(task), problem_->endPos(task), {}};
  p.occupation = taskOccupation(problem_->map(), problem_->energy(), p.startPos, p.endPos, p.start, p.end);
  ledger_.commitTaskFragments(slot, std::move(p));
  placed_[task] = true;
}

std::vector<std::size_t> RestfulAssigner::preferredSlots(std::size_t task) const {
  const auto& ts = problem_->tasks();
  std::vector<std::size_t> slots(ledger_.uavCount());
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  std::sort(slots.begin(), slots.end(), [&](std::size_t a, std::size_t b) {
    if (ledger_.workload(a) != ledger_.workload(b)) return ledger_.workload(a) < ledger_.workload(b);
    return ledger_.uavId(a) < ledger_.uavId(b);
  });
  auto toFront = [&](std::size_t slot) {
    auto it = std::find(slots.begin(), slots.end(), slot);
    std::rotate(slots.begin(), it, it + 1);
  };

  const TaskPlacement* succ = nullptr;
  for (auto s : ts.directSuccessors(task)) {
    if (!placed_[s]) continue;
    const auto* p = ledger_.placementOf(ts[s].id);
    if (!succ || p->start < succ->start) succ = p;
  }
  if (succ) toFront(*ledger_.uavSlotOfTask(succ->taskId));

  const TaskPlacement* pred = nullptr;
  for (auto q : ts.directPredecessors(task)) {
    if (!placed_[q]) continue;
    const auto* p = ledger_.placementOf(ts[q].id);
    if (!pred || p->end > pred->end) pred = p;
  }
  if (pred) toFront(*ledger_.uavSlotOfTask(pred->taskId));
  return slots;
}

std::vector<int> RestfulAssigner::preferredUavs(int taskId) const {
  std::vector<int> out;
  for (auto slot : preferredSlots(problem_->tasks().indexOf(taskId))) out.push_back(ledger_.uavId(slot));
  return out;
}

bool RestfulAssigner::bfpaAssign(int taskId) {
  const auto task = problem_->tasks().indexOf(taskId);
  if (placed_[task] || !problem_->tasks()[task].hasTimeWindow) return false;
  const auto starts = allowedStarts(task, trimmedWindow(task));
  if (starts.empty()) return false;
  for (auto slot : preferredSlots(task)) {
    const auto fr = frontier(slot);
    for (std::size_t g = ledger_.placements(slot).size() + 1; g-- > 0;) {
      const auto [lo, hi] = gapRange(task, slot, g);
      if (lo > hi) continue;
      for (auto it = starts.rbegin(); it != starts.rend(); ++it) {
        const Seconds top = std::min(hi, it->second);
        for (Seconds a = top; a >= std::max(lo, it->first); --a) {
          if (fits(task, slot, fr, g, a)) {
            commit(task, slot, a);
            return true;
          }
        }
      }
    }
  }
  return false;
}

bool RestfulAssigner::ffpaAssign(int taskId) {
  const auto task = problem_->tasks().indexOf(taskId);
  if (placed_[task]) return false;
  const auto starts = allowedStarts(task, trimmedWindow(task));
  if (starts.empty()) return false;
  const auto order = preferredSlots(task);

  for (auto slot : order) {
    const auto fr = frontier(slot);
    for (std::size_t g = 0; g < ledger_.placements(slot).size(); ++g) {
      const auto [lo, hi] = gapRange(task, slot, g);
      if (lo > hi) continue;
      for (const auto& iv : starts) {
        if (iv.first > hi) break;
        for (Seconds a = std::max(lo, iv.first); a <= std::min(hi, iv.second); ++a) {
          if (fits(task, slot, fr, g, a)) {
            commit(task, slot, a);
            return true;
          }
        }
      }
    }
  }

  for (auto slot : order) {
    const auto fr = frontier(slot);
    const auto g = ledger_.placements(slot).size();
    const auto [lo, hi] = gapRange(task, slot, g);
    if (lo > hi) continue;
    const Seconds settled = saturationStart(task, slot, g);
    bool exhausted = false;
    for (const auto& iv : starts) {
      if (exhausted || iv.first > hi) break;
      for (Seconds a = std::max(lo, iv.first); a <= std::min(hi, iv.second); ++a) {
        if (fits(task, slot, fr, g, a)) {
          commit(task, slot, a);
          return true;
        }
        if (a >= settled) {
          exhausted = true;
          break;
        }
      }
    }
  }
  return false;
}

bool RestfulAssigner::canPlace(int taskId, int uavId, Seconds start) const {
  const auto task = problem_->tasks().indexOf(taskId);
  if (placed_[task]) return false;
  const auto slot = ledger_.slotOf(uavId);
  const auto starts = allowedStarts(task, trimmedWindow(task));
  const bool free = std::any_of(starts.begin(), starts.end(),
                                [&](const Interval& iv) { return iv.first <= start && start <= iv.second; });
  if (!free) return false;
  const auto& ps = ledger_.placements(slot);
  const auto g = static_cast<std::size_t>(
      std::count_if(ps.begin(), ps.end(), [&](const TaskPlacement& p) { return p.start < start; }));
  const auto [lo, hi] = gapRange(task, slot, g);
  if (start < lo || start > hi) return false;
  return fits(task, slot, frontier(slot), g, start);
}

void RestfulAssigner::place(int taskId, int uavId, Seconds start) {
  const auto task = problem_->tasks().indexOf(taskId);
  if (placed_[task]) throw OverlapViolation("task " + std::to_string(taskId) + " is already placed");
  commit(task, ledger_.slotOf(uavId), start);
}

Schedule RestfulAssigner::insertSupportActions() const {
  const auto& m = problem_->map();
  const auto& ts = problem_->tasks();
  Schedule out;
  for (std::size_t slot = 0; slot < ledger_.uavCount(); ++slot) {
    const auto& bat = problem_->battery(slot);
    UavSchedule u{ledger_.uavId(slot), {}};
    Ticks level = bat.capacity();
    PosIndex pos = ledger_.initialPosition(slot);
    Seconds t = 0;
    for (const auto& p : ledger_.placements(slot)) {
      const auto g = bat.crossGap(pos, p.startPos, t, p.start, level, &u.actions);
      if (!g.feasible)
        throw InfeasibleEnergy("UAV " + std::to_string(u.uavId) + " cannot reach task " + std::to_string(p.taskId) +
                               " with a safe battery level");
      const auto& task = ts.byId(p.taskId);
      const auto kind = p.startPos == p.endPos ? ActionKind::PerformInspection : ActionKind::PerformMaterialHandling;
      u.actions.push_back({kind, {p.start, p.end}, m.id(p.startPos), m.id(p.endPos), p.taskId});
      level = g.levelAfter - task.processingTime * bat.perSecond();
      if (level < bat.floorAt(p.endPos))
        throw InfeasibleEnergy("UAV " + std::to_string(u.uavId) + " ends task " + std::to_string(p.taskId) +
                               " below its reserve");
      out.reportedEnergy += g.energy + task.processingTime;
      pos = p.endPos;
      t = p.end;
    }
    out.uavs.push_back(std::move(u));
  }
  return out;
}

std::optional<Schedule> scheduleSequence(const SchedulingProblem& problem, std::span<const int> sequence) {
  const auto& ts = problem.tasks();
  if (sequence.size() != ts.size()) throw InvalidSequence("sequence length does not match the task count");
  std::vector<bool> seen(ts.size(), false);
  std::vector<std::size_t> seq;
  seq.reserve(sequence.size());
  for (int id : sequence) {
    if (!ts.contains(id)) throw InvalidSequence("sequence names unknown task " + std::to_string(id));
    const auto i = ts.indexOf(id);
    if (seen[i]) throw InvalidSequence("sequence repeats task " + std::to_string(id));
    seen[i] = true;
    seq.push_back(i);
  }

  RestfulAssigner ra(problem);

  std::vector<std::size_t> byPosition(seq.size());
  std::iota(byPosition.begin(), byPosition.end(), std::size_t{0});
  std::stable_sort(byPosition.begin(), byPosition.end(), [&](std::size_t a, std::size_t b) {
    return problem.positionRank(seq[a]) < problem.positionRank(seq[b]);
  });
  for (auto k : byPosition) {
    const auto i = seq[k];
    if (ts[i].hasTimeWindow) ra.bfpaAssign(ts[i].id);
  }
  for (auto i : seq) {
    if (ra.isPlaced(ts[i].id)) continue;
    if (!ra.ffpaAssign(ts[i].id)) return std::nullopt;
  }
  try {
    return ra.insertSupportActions();
  } catch (const InfeasibleEnergy&) {
    return std::nullopt;
  }
}

std::optional<Schedule> scheduleSequence(std::span<const int> sequence, const TaskSet& tasks,
                                         std::span<const UavSpec> fleet, const MapGraph& map,
                                         const EnergyModel& energy) {
  SchedulingProblem problem(tasks, {fleet.begin(), fleet.end()}, map, energy);
  return scheduleSequence(problem, sequence);
}

}  // namespace uavsched
