#include "uavsched/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "uavsched/errors.hpp"
#include "uavsched/fragments.hpp"

namespace uavsched {

namespace {

struct UavState {
  PosIndex pos = -1;
  Seconds end = 0;
  Ticks level = 0;
  int tasks = 0;
};

struct Placed {
  std::size_t task;
  std::size_t slot;
  Seconds start;
};

// Depth-first search that appends tasks in non-decreasing start order (ties
// by task index), so every schedule is visited exactly once.
class Search {
 public:
  Search(const SchedulingProblem& problem, const OracleLimits& limits)
      : p_(problem), ts_(problem.tasks()), limits_(limits), clockStart_(std::chrono::steady_clock::now()) {
    const auto& fleet = p_.fleet();
    for (std::size_t k = 0; k < fleet.size(); ++k)
      uavs_.push_back({p_.map().index(fleet[k].initialPosition), 0, p_.battery(k).capacity(), 0});
    placed_.assign(ts_.size(), false);
    endOf_.assign(ts_.size(), 0);
    // Every task is reached from some task's end or from a station (start,
    // detour or plain wait), so the cheapest such leg bounds its approach.
    const auto& map = p_.map();
    approach_.assign(ts_.size(), kUnreachable);
    for (std::size_t i = 0; i < ts_.size(); ++i) {
      const PosIndex s = p_.startPos(i);
      for (auto st : map.stations()) approach_[i] = std::min(approach_[i], map.travel(st, s));
      for (std::size_t j = 0; j < ts_.size(); ++j)
        if (j != i) approach_[i] = std::min(approach_[i], map.travel(p_.endPos(j), s));
      remaining_ += ts_[i].processingTime + approach_[i];
    }

    Seconds maxTravel = 0;
    for (PosIndex a = 0; a < static_cast<PosIndex>(map.size()); ++a)
      for (PosIndex b = 0; b < static_cast<PosIndex>(map.size()); ++b)
        if (map.travel(a, b) < kUnreachable) maxTravel = std::max(maxTravel, map.travel(a, b));
    openSpan_ = p_.energy().fullRechargeDuration + p_.energy().minRechargeFragment + 2 * maxTravel;
    latestDue_ = p_.horizonEnd() - p_.energy().fullRechargeDuration;
  }

  // A quick pass over a few landmark starts per task (earliest, first
  // detour-capable, latest) seeds the incumbent for the exact pass.
  void run() {
    coarse_ = true;
    dfs(0, 0, 0, -1);
    coarse_ = false;
    if (!exhausted_) dfs(0, 0, 0, -1);
  }

  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }
  const std::optional<Seconds>& best() const { return best_; }
  const std::vector<Placed>& bestPlan() const { return bestPlan_; }

 private:
  bool outOfTime() {
    if (exhausted_) return true;
    if ((nodes_ & 0xfff) == 0) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - clockStart_;
      if (spent.count() > limits_.timeBudgetSeconds) exhausted_ = true;
    }
    return exhausted_;
  }

  bool positionFree(const std::vector<PositionOccupation>& occ) const {
    for (const auto& o : occ)
      for (const auto& h : held_)
        if (h.position == o.position && h.span.overlaps(o.span)) return false;
    return true;
  }

  void dfs(std::size_t depth, Seconds energy, Seconds lastStart, std::ptrdiff_t lastTask) {
    ++nodes_;
    if (outOfTime()) return;
    if (depth == ts_.size()) {
      if (!best_ || energy < *best_) {
        best_ = energy;
        bestPlan_ = plan_;
      }
      return;
    }
    const auto& map = p_.map();
    const auto& e = p_.energy();
    for (std::size_t t = 0; t < ts_.size(); ++t) {
      if (placed_[t]) continue;
      const auto& task = ts_[t];
      Seconds predEnd = 0;
      bool ready = true;
      for (auto q : ts_.directPredecessors(t)) {
        if (!placed_[q]) {
          ready = false;
          break;
        }
        predEnd = std::max(predEnd, endOf_[q]);
      }
      if (!ready) continue;
      const Seconds w = task.processingTime;
      const Seconds own = w + approach_[t];
      const Seconds rest = remaining_ - own;
      const PosIndex s = p_.startPos(t);
      const PosIndex z = p_.endPos(t);
      const Seconds floorStart = static_cast<std::ptrdiff_t>(t) > lastTask ? lastStart : lastStart + 1;

      for (std::size_t k = 0; k < uavs_.size(); ++k) {
        auto& u = uavs_[k];
        if (u.tasks == 0 && identicalIdleBefore(k)) continue;
        const auto& bat = p_.battery(k);
        const Seconds d = map.travel(u.pos, s);
        if (d >= kUnreachable) continue;
        Seconds lo = std::max({floorStart, predEnd, u.end + d, task.hasTimeWindow ? task.releaseDate : Seconds{0}});
        const Seconds hi = task.hasTimeWindow ? task.dueDate - w : std::max(lo, latestDue_) + openSpan_;
        Seconds restStart = kUnreachable;  // first start whose idle span allows a recharge detour
        if (!map.isStation(u.pos)) {
          const auto [h, c1] = *map.nearestStation(u.pos);
          const Seconds c2 = map.travel(h, s);
          if (c2 < kUnreachable) restStart = u.end + c1 + c2 + e.minRechargeFragment;
        }
        for (Seconds a = lo; a <= hi; ++a) {
          if (coarse_ && a != lo && a != restStart && a != hi) {
            const Seconds next = a < restStart && restStart <= hi ? restStart : hi;
            a = next - 1;
            continue;
          }
          const auto gap = bat.crossGap(u.pos, s, u.end, a, u.level);
          if (!gap.feasible) continue;
          const Seconds spent = energy + gap.energy + w;
          if (best_ && spent + rest >= *best_) {
            // Hover cost grows with the start until a detour becomes possible;
            // from then on the cost is flat.
            if (!map.isStation(u.pos) && !gap.recharged && restStart < kUnreachable && a + 1 < restStart) {
              a = restStart - 1;
              continue;
            }
            break;
          }
          const Ticks after = gap.levelAfter - w * bat.perSecond();
          if (after < bat.floorAt(z)) continue;
          const auto occ = taskOccupation(map, e, s, z, a, a + w);
          if (!positionFree(occ)) continue;

          const UavState saved = u;
          u = {z, a + w, after, u.tasks + 1};
          placed_[t] = true;
          endOf_[t] = a + w;
          remaining_ -= own;
          held_.insert(held_.end(), occ.begin(), occ.end());
          plan_.push_back({t, k, a});

          dfs(depth + 1, spent, a, static_cast<std::ptrdiff_t>(t));

          plan_.pop_back();
          held_.resize(held_.size() - occ.size());
          remaining_ += own;
          placed_[t] = false;
          u = saved;
          if (exhausted_) return;
        }
      }
    }
  }

  // An unused UAV is interchangeable with an earlier unused one that starts
  // at the same station with the same battery.
  bool identicalIdleBefore(std::size_t k) const {
    const auto& fleet = p_.fleet();
    for (std::size_t j = 0; j < k; ++j)
      if (uavs_[j].tasks == 0 && fleet[j].initialPosition == fleet[k].initialPosition &&
          fleet[j].batteryCapacity == fleet[k].batteryCapacity)
        return true;
    return false;
  }

  const SchedulingProblem& p_;
  const TaskSet& ts_;
  OracleLimits limits_;
  std::chrono::steady_clock::time_point clockStart_;
  std::vector<UavState> uavs_;
  std::vector<bool> placed_;
  std::vector<Seconds> endOf_;
  std::vector<PositionOccupation> held_;
  std::vector<Placed> plan_;
  std::vector<Placed> bestPlan_;
  std::vector<Seconds> approach_;
  Seconds remaining_ = 0;  // lower bound on the energy of the unplaced tasks
  Seconds openSpan_ = 0;
  Seconds latestDue_ = 0;
  std::optional<Seconds> best_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  bool coarse_ = false;
};

}  // namespace

OracleResult bruteForceOptimal(const TaskSet& tasks, std::span<const UavSpec> fleet, const MapGraph& map,
                               const EnergyModel& energy, const OracleLimits& limits) {
  if (static_cast<int>(tasks.size()) > limits.maxTasks)
    throw LimitExceeded(std::to_string(tasks.size()) + " tasks exceed the oracle limit of " +
                        std::to_string(limits.maxTasks));
  if (static_cast<int>(fleet.size()) > limits.maxUavs)
    throw LimitExceeded(std::to_string(fleet.size()) + " UAVs exceed the oracle limit of " +
                        std::to_string(limits.maxUavs));
  const SchedulingProblem problem(tasks, {fleet.begin(), fleet.end()}, map, energy);
  Search search(problem, limits);
  search.run();

  OracleResult r;
  r.exhausted = search.exhausted();
  r.nodes = search.nodes();
  r.energy = search.best();
  if (r.energy) {
    RestfulAssigner builder(problem);
    for (const auto& pl : search.bestPlan())
      builder.place(tasks[pl.task].id, problem.fleet()[pl.slot].id, pl.start);
    r.schedule = builder.insertSupportActions();
  }
  return r;
}

std::string_view oracleLimitations() {
  return "Exact within the scheduling model: every task-to-UAV assignment, every per-UAV order and every "
         "integer start second are enumerated (depth-first, tasks appended in start order, pruned by the "
         "best energy found). Idle spans between duties follow the same recharge/hover rule as the "
         "scheduler, so the optimum is over that rule, not over arbitrary recharge placements. Windowless "
         "tasks are only tried up to one full recharge cycle past the latest due date. Defaults: at most 6 "
         "tasks and 2 UAVs; a search cut by the time budget reports 'exhausted' and its energy is only an "
         "upper bound. This oracle stands in for the commercial MILP solver (CPLEX) used in the original "
         "experiments; CPLEX runtimes are not reproduced and no MILP relaxation is solved.";
}

}  // namespace uavsched
