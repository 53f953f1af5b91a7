#ifndef UAVSCHED_DOMAIN_HPP
#define UAVSCHED_DOMAIN_HPP

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "uavsched/map.hpp"

namespace uavsched {

enum class TaskKind { Inspection, MaterialHandling };

struct Task {
  int id = 0;
  std::string startPos;
  std::string endPos;
  Seconds processingTime = 0;
  Seconds releaseDate = 0;
  Seconds dueDate = 0;
  std::vector<int> predecessors;
  bool hasTimeWindow = false;

  /// Inspection tasks start and end at the same position.
  TaskKind kind() const { return startPos == endPos ? TaskKind::Inspection : TaskKind::MaterialHandling; }

  friend bool operator==(const Task&, const Task&) = default;
};

// Validated, immutable task collection. Stores tasks in document order and
// precomputes the precedence closure both ways; indices (not ids) are used
// by the scheduling internals.
class TaskSet {
 public:
  TaskSet() = default;
  /// Throws DanglingPredecessor, CyclicPrecedence, RedundantPrecedence,
  /// InvalidWindow or ParseError (duplicate / non-positive ids).
  explicit TaskSet(std::vector<Task> tasks);

  std::size_t size() const { return tasks_.size(); }
  bool empty() const { return tasks_.empty(); }
  const std::vector<Task>& tasks() const { return tasks_; }
  const Task& operator[](std::size_t i) const { return tasks_[i]; }

  bool contains(int id) const { return index_.contains(id); }
  /// Throws UnknownTask.
  std::size_t indexOf(int id) const;
  const Task& byId(int id) const { return tasks_[indexOf(id)]; }

  const std::vector<std::size_t>& directPredecessors(std::size_t i) const { return preds_[i]; }
  const std::vector<std::size_t>& directSuccessors(std::size_t i) const { return succs_[i]; }
  /// Transitive closures, sorted by index.
  const std::vector<std::size_t>& cumulativePredecessors(std::size_t i) const { return cumPreds_[i]; }
  const std::vector<std::size_t>& cumulativeSuccessors(std::size_t i) const { return cumSuccs_[i]; }

  /// A topological order of task indices (smallest index first among ready tasks).
  const std::vector<std::size_t>& topologicalOrder() const { return topo_; }

  std::vector<int> ids() const;

  friend bool operator==(const TaskSet& a, const TaskSet& b) { return a.tasks_ == b.tasks_; }

 private:
  std::vector<Task> tasks_;
  std::unordered_map<int, std::size_t> index_;
  std::vector<std::vector<std::size_t>> preds_, succs_, cumPreds_, cumSuccs_;
  std::vector<std::size_t> topo_;
};

/// Parses the JSON task document.
TaskSet parseTaskSet(std::string_view document);
/// Parses CSV rows in the order id,start,end,processing,release,due,preds.
TaskSet parseTaskSetCsv(std::string_view document);
/// Loads either format; `.csv` files use the CSV reader.
TaskSet loadTaskSetFile(const std::string& path);

/// Canonical JSON form; parseTaskSet(serializeTaskSet(ts)) == ts.
std::string serializeTaskSet(const TaskSet& ts);

/// Window length minus processing time. Throws NoTimeWindow.
Seconds slackOf(const Task& t);

/// Transitive predecessor ids of task `id`. Throws UnknownTask.
std::set<int> cumulativePredecessors(const TaskSet& ts, int id);

struct UavSpec {
  int id = 0;
  std::string initialPosition;
  Seconds batteryCapacity = 1200;

  friend bool operator==(const UavSpec&, const UavSpec&) = default;
};

struct EnergyModel {
  Seconds fullRechargeDuration = 2700;
  Seconds minRechargeFragment = 270;
  Seconds loadUnloadTime = 30;
  Seconds inspectionTime = 10;

  /// Time the UAV spends at each end of a material-handling task.
  Seconds handlingPortion(Seconds processingTime) const;
};

/// Throws ConfigError when the model is inconsistent.
void validateEnergyModel(const EnergyModel& energy);

/// Checks ids, capacities and that every UAV starts at a recharge station.
void validateFleet(std::span<const UavSpec> fleet, const MapGraph& map);

/// `count` UAVs with ids 1..count, spread round-robin over the stations.
std::vector<UavSpec> makeFleet(int count, const MapGraph& map, Seconds batteryCapacity = 1200);

}  // namespace uavsched

#endif  // UAVSCHED_DOMAIN_HPP
