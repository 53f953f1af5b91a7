#include "uavsched/map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "uavsched/errors.hpp"

namespace uavsched {

namespace {

using json = nlohmann::json;

// Marks every position reachable from `sources` following edges forward
// (or backward when `reverse` is set).
std::vector<bool> reachableFrom(std::size_t n, const std::vector<std::vector<std::pair<PosIndex, Seconds>>>& adj,
                                const std::vector<PosIndex>& sources) {
  std::vector<bool> seen(n, false);
  std::vector<PosIndex> stack(sources.begin(), sources.end());
  for (auto s : sources) seen[static_cast<std::size_t>(s)] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

Seconds ceilDiv(Seconds a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

MapGraph::MapGraph(std::vector<Position> positions, std::vector<Edge> edges, ScaleFactor scale,
                   std::optional<Vec3> bounds, double speed)
    : positions_(std::move(positions)), edges_(std::move(edges)), scale_(scale), bounds_(bounds), speed_(speed) {
  if (scale_.num <= 0 || scale_.den <= 0) throw ParseError("map scale factor must be positive");
  if (!(speed_ > 0.0)) throw ParseError("map speed must be positive");

  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const auto& p = positions_[i];
    if (p.id.empty()) throw ParseError("position with empty id");
    if (!byId_.emplace(p.id, static_cast<PosIndex>(i)).second)
      throw ParseError("duplicate position id '" + p.id + "'");
    if (bounds_) {
      const auto& b = *bounds_;
      const auto& c = p.coords;
      if (c.x < 0 || c.y < 0 || c.z < 0 || c.x > b.x || c.y > b.y || c.z > b.z)
        throw ParseError("position '" + p.id + "' lies outside the environment bounds");
    }
    if (p.isRechargeStation) stations_.push_back(static_cast<PosIndex>(i));
  }
  std::sort(stations_.begin(), stations_.end(),
            [this](PosIndex a, PosIndex b) { return id(a) < id(b); });

  const auto n = positions_.size();
  std::vector<std::vector<std::pair<PosIndex, Seconds>>> adj(n), radj(n);
  for (const auto& e : edges_) {
    const auto from = find(e.from);
    const auto to = find(e.to);
    if (!from || !to) throw ParseError("edge references unknown position '" + (from ? e.to : e.from) + "'");
    if (*from == *to) throw ParseError("self-loop edge at '" + e.from + "'");
    if (e.travelTime < 1) throw ParseError("edge " + e.from + "->" + e.to + " has non-positive travel time");
    adj[static_cast<std::size_t>(*from)].emplace_back(*to, e.travelTime);
    radj[static_cast<std::size_t>(*to)].emplace_back(*from, e.travelTime);
  }

  if (stations_.empty()) throw TopologyError("map has no recharge station");
  const auto fromStations = reachableFrom(n, adj, stations_);
  const auto toStations = reachableFrom(n, radj, stations_);
  for (std::size_t i = 0; i < n; ++i) {
    if (!toStations[i])
      throw TopologyError("position '" + positions_[i].id + "' cannot reach any recharge station");
    if (!fromStations[i])
      throw TopologyError("position '" + positions_[i].id + "' cannot be reached from any recharge station");
  }

  routes_ = RouteTable(n);
  using Item = std::pair<Seconds, PosIndex>;
  for (std::size_t s = 0; s < n; ++s) {
    auto src = static_cast<PosIndex>(s);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    routes_.at(src, src) = 0;
    pq.emplace(0, src);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > routes_.at(src, u)) continue;
      for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
        if (d + w < routes_.at(src, v)) {
          routes_.at(src, v) = d + w;
          pq.emplace(d + w, v);
        }
      }
    }
  }

  nearest_.assign(n, {-1, kUnreachable});
  for (std::size_t i = 0; i < n; ++i) {
    for (auto st : stations_) {  // ascending id, so strict < keeps the smallest id on ties
      const auto t = routes_.at(static_cast<PosIndex>(i), st);
      if (t < nearest_[i].second) nearest_[i] = {st, t};
    }
  }
}

std::optional<PosIndex> MapGraph::find(std::string_view id) const {
  auto it = byId_.find(std::string(id));
  if (it == byId_.end()) return std::nullopt;
  return it->second;
}

PosIndex MapGraph::index(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw UnknownPosition("unknown position '" + std::string(id) + "'");
}

MapGraph loadMap(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ParseError(std::string("map document: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("positions") || !doc.contains("edges"))
      throw ParseError("map document needs 'positions' and 'edges'");
    const double speed = doc.value("speed", 1.0);
    if (!(speed > 0.0)) throw ParseError("map speed must be positive");

    std::vector<Position> positions;
    for (const auto& p : doc.at("positions")) {
      positions.push_back(Position{p.at("id").get<std::string>(),
                                   {p.at("x").get<double>(), p.at("y").get<double>(), p.at("z").get<double>()},
                                   p.value("recharge", false)});
    }
    std::unordered_map<std::string, Vec3> coords;
    for (const auto& p : positions) coords.emplace(p.id, p.coords);

    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      Edge edge{e.at("from").get<std::string>(), e.at("to").get<std::string>(), 0};
      if (e.contains("time")) {
        edge.travelTime = e.at("time").get<Seconds>();
      } else {
        auto a = coords.find(edge.from);
        auto b = coords.find(edge.to);
        if (a == coords.end() || b == coords.end())
          throw ParseError("edge references unknown position '" + edge.from + "->" + edge.to + "'");
        const double dx = a->second.x - b->second.x;
        const double dy = a->second.y - b->second.y;
        const double dz = a->second.z - b->second.z;
        const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
        // Guard against 3.0000000001-style noise before rounding up.
        edge.travelTime = std::max<Seconds>(1, static_cast<Seconds>(std::ceil(len / speed - 1e-9)));
      }
      edges.push_back(std::move(edge));
    }

    std::optional<Vec3> bounds;
    if (doc.contains("bounds")) {
      const auto& b = doc.at("bounds");
      bounds = Vec3{b.at("x").get<double>(), b.at("y").get<double>(), b.at("z").get<double>()};
    }
    ScaleFactor scale;
    if (doc.contains("scale")) {
      scale.num = doc.at("scale").at("num").get<std::int64_t>();
      scale.den = doc.at("scale").at("den").get<std::int64_t>();
    }
    return MapGraph(std::move(positions), std::move(edges), scale, bounds, speed);
  } catch (const json::exception& e) {
    throw ParseError(std::string("map document: ") + e.what());
  }
}

MapGraph loadMapFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open map file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return loadMap(ss.str());
}

std::string serializeMap(const MapGraph& g) {
  nlohmann::ordered_json doc;
  doc["speed"] = g.speed();
  doc["scale"] = {{"num", g.scaleFactor().num}, {"den", g.scaleFactor().den}};
  if (g.bounds()) doc["bounds"] = {{"x", g.bounds()->x}, {"y", g.bounds()->y}, {"z", g.bounds()->z}};
  auto& positions = doc["positions"] = nlohmann::ordered_json::array();
  for (const auto& p : g.positions()) {
    positions.push_back(
        {{"id", p.id}, {"x", p.coords.x}, {"y", p.coords.y}, {"z", p.coords.z}, {"recharge", p.isRechargeStation}});
  }
  auto& edges = doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) edges.push_back({{"from", e.from}, {"to", e.to}, {"time", e.travelTime}});
  return doc.dump(2);
}

Seconds shortestTravelTime(const MapGraph& g, std::string_view from, std::string_view to) {
  return g.travel(g.index(from), g.index(to));
}

std::pair<std::string, Seconds> nearestRechargeStation(const MapGraph& g, std::string_view from) {
  const auto n = g.nearestStation(g.index(from));
  if (!n) throw TopologyError("no recharge station reachable from '" + std::string(from) + "'");
  return {g.id(n->first), n->second};
}

MapGraph scaleMap(const MapGraph& g, ScaleFactor factor) {
  if (factor.num <= 0 || factor.den <= 0) throw ConfigError("scale factor must be positive");
  const double f = factor.value();
  std::vector<Position> positions = g.positions();
  for (auto& p : positions) p.coords = {p.coords.x * f, p.coords.y * f, p.coords.z * f};
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) e.travelTime = ceilDiv(e.travelTime * factor.num, factor.den);
  std::optional<Vec3> bounds = g.bounds();
  if (bounds) *bounds = {bounds->x * f, bounds->y * f, bounds->z * f};
  ScaleFactor combined{g.scaleFactor().num * factor.num, g.scaleFactor().den * factor.den};
  const auto d = std::gcd(combined.num, combined.den);
  combined.num /= d;
  combined.den /= d;
  return MapGraph(std::move(positions), std::move(edges), combined, bounds, g.speed());
}

}  // namespace uavsched
