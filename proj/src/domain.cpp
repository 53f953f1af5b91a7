#include "uavsched/domain.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "uavsched/errors.hpp"

namespace uavsched {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool isInteger(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

std::int64_t toInt(const std::string& s, const char* what, std::size_t line) {
  if (!isInteger(s)) throw ParseError("line " + std::to_string(line) + ": " + what + " '" + s + "' is not an integer");
  return std::stoll(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

TaskSet::TaskSet(std::vector<Task> tasks) : tasks_(std::move(tasks)) {
  const auto n = tasks_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = tasks_[i];
    if (t.id <= 0) throw ParseError("task ids must be positive (got " + std::to_string(t.id) + ")");
    if (!index_.emplace(t.id, i).second) throw ParseError("duplicate task id " + std::to_string(t.id));
    if (t.processingTime <= 0) throw InvalidWindow("task " + std::to_string(t.id) + " has non-positive processing time");
    if (t.hasTimeWindow && t.releaseDate + t.processingTime > t.dueDate)
      throw InvalidWindow("task " + std::to_string(t.id) + ": release + processing exceeds due date");
    if (t.hasTimeWindow && t.releaseDate < 0) throw InvalidWindow("task " + std::to_string(t.id) + ": negative release date");
  }

  preds_.assign(n, {});
  succs_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (int p : tasks_[i].predecessors) {
      if (p == tasks_[i].id) throw CyclicPrecedence("task " + std::to_string(p) + " precedes itself");
      auto it = index_.find(p);
      if (it == index_.end())
        throw DanglingPredecessor("task " + std::to_string(tasks_[i].id) + " references unknown predecessor " +
                                  std::to_string(p));
      if (std::find(preds_[i].begin(), preds_[i].end(), it->second) != preds_[i].end())
        throw RedundantPrecedence("task " + std::to_string(tasks_[i].id) + " lists predecessor " + std::to_string(p) +
                                  " twice");
      preds_[i].push_back(it->second);
      succs_[it->second].push_back(i);
    }
  }
  for (auto& v : preds_) std::sort(v.begin(), v.end());
  for (auto& v : succs_) std::sort(v.begin(), v.end());

  // Kahn's algorithm; a leftover task means a cycle.
  std::vector<std::size_t> indeg(n);
  for (std::size_t i = 0; i < n; ++i) indeg[i] = preds_[i].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  while (!ready.empty()) {
    auto u = ready.top();
    ready.pop();
    topo_.push_back(u);
    for (auto v : succs_[u])
      if (--indeg[v] == 0) ready.push(v);
  }
  if (topo_.size() != n) {
    for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] > 0) throw CyclicPrecedence("precedence cycle through task " + std::to_string(tasks_[i].id));
  }

  cumPreds_.assign(n, {});
  for (auto u : topo_) {
    std::vector<std::size_t> acc;
    for (auto p : preds_[u]) {
      acc.push_back(p);
      acc.insert(acc.end(), cumPreds_[p].begin(), cumPreds_[p].end());
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    cumPreds_[u] = std::move(acc);
  }
  cumSuccs_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i)
    for (auto p : cumPreds_[i]) cumSuccs_[p].push_back(i);

  // An edge p->i is redundant when p is already an ancestor of another direct predecessor.
  for (std::size_t i = 0; i < n; ++i) {
    for (auto p : preds_[i]) {
      for (auto q : preds_[i]) {
        if (q != p && std::binary_search(cumPreds_[q].begin(), cumPreds_[q].end(), p))
          throw RedundantPrecedence("precedence " + std::to_string(tasks_[p].id) + "->" + std::to_string(tasks_[i].id) +
                                    " is implied via task " + std::to_string(tasks_[q].id));
      }
    }
  }
}

std::size_t TaskSet::indexOf(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownTask("unknown task " + std::to_string(id));
  return it->second;
}

std::vector<int> TaskSet::ids() const {
  std::vector<int> out;
  out.reserve(tasks_.size());
  for (const auto& t : tasks_) out.push_back(t.id);
  return out;
}

TaskSet parseTaskSet(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ParseError(std::string("task document: ") + e.what());
  }
  std::vector<Task> tasks;
  try {
    if (!doc.is_object() || !doc.contains("tasks")) throw ParseError("task document needs a 'tasks' list");
    for (const auto& j : doc.at("tasks")) {
      Task t;
      t.id = j.at("id").get<int>();
      t.startPos = j.at("start").get<std::string>();
      t.endPos = j.at("end").get<std::string>();
      t.processingTime = j.at("processing").get<Seconds>();
      const bool hasRelease = j.contains("release") && !j.at("release").is_null();
      const bool hasDue = j.contains("due") && !j.at("due").is_null();
      if (hasRelease != hasDue) throw ParseError("task " + std::to_string(t.id) + " has only one window bound");
      t.hasTimeWindow = hasRelease;
      if (hasRelease) {
        t.releaseDate = j.at("release").get<Seconds>();
        t.dueDate = j.at("due").get<Seconds>();
      }
      if (j.contains("predecessors")) t.predecessors = j.at("predecessors").get<std::vector<int>>();
      tasks.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("task document: ") + e.what());
  }
  return TaskSet(std::move(tasks));
}

TaskSet parseTaskSetCsv(std::string_view document) {
  std::vector<Task> tasks;
  std::istringstream in{std::string(document)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto cols = split(trimmed, ',');
    if (!isInteger(cols[0])) continue;  // header row
    if (cols.size() != 7)
      throw ParseError("line " + std::to_string(lineNo) + ": expected 7 columns, got " + std::to_string(cols.size()));
    // A numeric third column means the row follows the printed header order
    // (processing before end position), which this reader does not accept.
    if (isInteger(cols[2]) && !isInteger(cols[3]))
      throw ParseError("line " + std::to_string(lineNo) +
                       ": columns look like id,start,processing,end; expected id,start,end,processing");
    Task t;
    t.id = static_cast<int>(toInt(cols[0], "id", lineNo));
    t.startPos = cols[1];
    t.endPos = cols[2];
    t.processingTime = toInt(cols[3], "processing", lineNo);
    const bool windowless = cols[4] == "-" || cols[4].empty();
    if (windowless != (cols[5] == "-" || cols[5].empty()))
      throw ParseError("line " + std::to_string(lineNo) + ": only one window bound given");
    t.hasTimeWindow = !windowless;
    if (t.hasTimeWindow) {
      t.releaseDate = toInt(cols[4], "release", lineNo);
      t.dueDate = toInt(cols[5], "due", lineNo);
    }
    if (cols[6] != "-" && !cols[6].empty()) {
      for (const auto& p : split(cols[6], ';')) t.predecessors.push_back(static_cast<int>(toInt(p, "predecessor", lineNo)));
    }
    tasks.push_back(std::move(t));
  }
  return TaskSet(std::move(tasks));
}

TaskSet loadTaskSetFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open task file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return parseTaskSetCsv(ss.str());
  return parseTaskSet(ss.str());
}

std::string serializeTaskSet(const TaskSet& ts) {
  nlohmann::ordered_json doc;
  auto& arr = doc["tasks"] = nlohmann::ordered_json::array();
  for (const auto& t : ts.tasks()) {
    nlohmann::ordered_json j;
    j["id"] = t.id;
    j["start"] = t.startPos;
    j["end"] = t.endPos;
    j["processing"] = t.processingTime;
    if (t.hasTimeWindow) {
      j["release"] = t.releaseDate;
      j["due"] = t.dueDate;
    }
    j["predecessors"] = t.predecessors;
    arr.push_back(std::move(j));
  }
  return doc.dump(2);
}

Seconds slackOf(const Task& t) {
  if (!t.hasTimeWindow) throw NoTimeWindow("task " + std::to_string(t.id) + " has no time window");
  return (t.dueDate - t.releaseDate) - t.processingTime;
}

std::set<int> cumulativePredecessors(const TaskSet& ts, int id) {
  std::set<int> out;
  for (auto p : ts.cumulativePredecessors(ts.indexOf(id))) out.insert(ts[p].id);
  return out;
}

Seconds EnergyModel::handlingPortion(Seconds processingTime) const {
  return std::max<Seconds>(1, std::min(loadUnloadTime / 2, processingTime / 2));
}

void validateEnergyModel(const EnergyModel& e) {
  if (e.fullRechargeDuration <= 0) throw ConfigError("full recharge duration must be positive");
  if (e.minRechargeFragment <= 0 || e.minRechargeFragment > e.fullRechargeDuration)
    throw ConfigError("minimum recharge fragment must lie in (0, full recharge duration]");
  if (e.loadUnloadTime < 0 || e.inspectionTime <= 0) throw ConfigError("task time constants must be positive");
}

void validateFleet(std::span<const UavSpec> fleet, const MapGraph& map) {
  std::set<int> seen;
  for (const auto& u : fleet) {
    if (u.id <= 0) throw ConfigError("UAV ids must be positive");
    if (!seen.insert(u.id).second) throw ConfigError("duplicate UAV id " + std::to_string(u.id));
    if (u.batteryCapacity <= 0) throw ConfigError("UAV " + std::to_string(u.id) + " has non-positive battery capacity");
    if (!map.isStation(map.index(u.initialPosition)))
      throw ConfigError("UAV " + std::to_string(u.id) + " does not start at a recharge station");
  }
}

std::vector<UavSpec> makeFleet(int count, const MapGraph& map, Seconds batteryCapacity) {
  if (count <= 0) throw ConfigError("fleet size must be positive");
  std::vector<UavSpec> fleet;
  const auto& st = map.stations();
  for (int k = 0; k < count; ++k)
    fleet.push_back({k + 1, map.id(st[static_cast<std::size_t>(k) % st.size()]), batteryCapacity});
  return fleet;
}

}  // namespace uavsched
