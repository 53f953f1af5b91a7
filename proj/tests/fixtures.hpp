#ifndef UAVSCHED_TEST_FIXTURES_HPP
#define UAVSCHED_TEST_FIXTURES_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "uavsched/domain.hpp"
#include "uavsched/map.hpp"

namespace fixtures {

using uavsched::Seconds;

inline std::string dataPath(const std::string& name) { return std::string(UAVSCHED_DATA_DIR) + "/" + name; }

inline uavsched::MapGraph labMap() { return uavsched::loadMapFile(dataPath("lab_map.json")); }

inline uavsched::TaskSet table1() { return uavsched::loadTaskSetFile(dataPath("table1.json")); }

// Station S and point X, `t` seconds apart in both directions.
inline uavsched::MapGraph lineMap(Seconds t = 5) {
  nlohmann::json doc = {
      {"positions",
       {{{"id", "S"}, {"x", 0}, {"y", 0}, {"z", 0}, {"recharge", true}},
        {{"id", "X"}, {"x", t}, {"y", 0}, {"z", 0}}}},
      {"edges", {{{"from", "S"}, {"to", "X"}, {"time", t}}, {{"from", "X"}, {"to", "S"}, {"time", t}}}}};
  return uavsched::loadMap(doc.dump());
}

// Station S with two points X and Y: S<->X `sx`, S<->Y `sy`, X<->Y `xy`.
inline uavsched::MapGraph triangleMap(Seconds sx, Seconds sy, Seconds xy) {
  nlohmann::json doc = {{"positions",
                         {{{"id", "S"}, {"x", 0}, {"y", 0}, {"z", 0}, {"recharge", true}},
                          {{"id", "X"}, {"x", 1}, {"y", 0}, {"z", 0}},
                          {{"id", "Y"}, {"x", 0}, {"y", 1}, {"z", 0}}}},
                        {"edges",
                         {{{"from", "S"}, {"to", "X"}, {"time", sx}},
                          {{"from", "X"}, {"to", "S"}, {"time", sx}},
                          {{"from", "S"}, {"to", "Y"}, {"time", sy}},
                          {{"from", "Y"}, {"to", "S"}, {"time", sy}},
                          {{"from", "X"}, {"to", "Y"}, {"time", xy}},
                          {{"from", "Y"}, {"to", "X"}, {"time", xy}}}}};
  return uavsched::loadMap(doc.dump());
}

inline uavsched::Task windowed(int id, std::string from, std::string to, Seconds w, Seconds release, Seconds due,
                               std::vector<int> preds = {}) {
  uavsched::Task t;
  t.id = id;
  t.startPos = std::move(from);
  t.endPos = std::move(to);
  t.processingTime = w;
  t.releaseDate = release;
  t.dueDate = due;
  t.hasTimeWindow = true;
  t.predecessors = std::move(preds);
  return t;
}

inline uavsched::Task inspection(int id, std::string pos, Seconds release, Seconds due, std::vector<int> preds = {}) {
  return windowed(id, pos, pos, 10, release, due, std::move(preds));
}

inline uavsched::Task unwindowed(int id, std::string from, std::string to, Seconds w, std::vector<int> preds = {}) {
  uavsched::Task t;
  t.id = id;
  t.startPos = std::move(from);
  t.endPos = std::move(to);
  t.processingTime = w;
  t.predecessors = std::move(preds);
  return t;
}

inline std::vector<uavsched::UavSpec> fleetAt(const std::string& station, int count, Seconds capacity = 1200) {
  std::vector<uavsched::UavSpec> f;
  for (int i = 1; i <= count; ++i) f.push_back({i, station, capacity});
  return f;
}

}  // namespace fixtures

#endif  // UAVSCHED_TEST_FIXTURES_HPP
