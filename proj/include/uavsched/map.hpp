#ifndef UAVSCHED_MAP_HPP
#define UAVSCHED_MAP_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace uavsched {

/// Integer seconds; the whole system runs on an integer-second clock.
using Seconds = std::int64_t;

/// Travel time reported for position pairs without a directed route.
inline constexpr Seconds kUnreachable = std::numeric_limits<Seconds>::max() / 4;

using PosIndex = std::int32_t;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Position {
  std::string id;
  Vec3 coords;
  bool isRechargeStation = false;
};

struct Edge {
  std::string from;
  std::string to;
  Seconds travelTime = 1;
};

/// Positive rational multiplier applied by scaleMap().
struct ScaleFactor {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const ScaleFactor&, const ScaleFactor&) = default;
};

/// Dense all-pairs matrix of shortest directed travel times.
class RouteTable {
 public:
  RouteTable() = default;
  explicit RouteTable(std::size_t n) : n_(n), dist_(n * n, kUnreachable) {}

  std::size_t size() const { return n_; }
  Seconds at(PosIndex from, PosIndex to) const {
    return dist_[static_cast<std::size_t>(from) * n_ + static_cast<std::size_t>(to)];
  }
  Seconds& at(PosIndex from, PosIndex to) {
    return dist_[static_cast<std::size_t>(from) * n_ + static_cast<std::size_t>(to)];
  }

  friend bool operator==(const RouteTable&, const RouteTable&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Seconds> dist_;
};

// Immutable directed-path environment. Construction validates ids, edge
// endpoints, travel times and recharge-station connectivity, then runs
// Dijkstra from every position to fill the route table.
class MapGraph {
 public:
  MapGraph(std::vector<Position> positions, std::vector<Edge> edges,
           ScaleFactor scale = {}, std::optional<Vec3> bounds = std::nullopt,
           double speed = 1.0);

  const std::vector<Position>& positions() const { return positions_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const RouteTable& routes() const { return routes_; }
  ScaleFactor scaleFactor() const { return scale_; }
  const std::optional<Vec3>& bounds() const { return bounds_; }
  double speed() const { return speed_; }
  std::size_t size() const { return positions_.size(); }

  /// Throws UnknownPosition.
  PosIndex index(std::string_view id) const;
  std::optional<PosIndex> find(std::string_view id) const;
  const Position& position(PosIndex i) const { return positions_[static_cast<std::size_t>(i)]; }
  const std::string& id(PosIndex i) const { return position(i).id; }
  bool isStation(PosIndex i) const { return position(i).isRechargeStation; }

  Seconds travel(PosIndex from, PosIndex to) const { return routes_.at(from, to); }

  /// Station indices sorted by ascending id.
  const std::vector<PosIndex>& stations() const { return stations_; }

  /// Nearest reachable station (ties by ascending id); nullopt if none.
  std::optional<std::pair<PosIndex, Seconds>> nearestStation(PosIndex from) const {
    const auto& n = nearest_[static_cast<std::size_t>(from)];
    if (n.second >= kUnreachable) return std::nullopt;
    return n;
  }

  /// Flight time to the nearest station; kUnreachable if none can be reached.
  Seconds reserve(PosIndex from) const { return nearest_[static_cast<std::size_t>(from)].second; }

 private:
  std::vector<Position> positions_;
  std::vector<Edge> edges_;
  ScaleFactor scale_;
  std::optional<Vec3> bounds_;
  double speed_ = 1.0;
  std::unordered_map<std::string, PosIndex> byId_;
  std::vector<PosIndex> stations_;
  RouteTable routes_;
  std::vector<std::pair<PosIndex, Seconds>> nearest_;
};

/// Parses a map document (JSON). Throws ParseError or TopologyError.
MapGraph loadMap(std::string_view document);
MapGraph loadMapFile(const std::string& path);

/// Canonical JSON with explicit travel times on every edge.
std::string serializeMap(const MapGraph& g);

Seconds shortestTravelTime(const MapGraph& g, std::string_view from, std::string_view to);

std::pair<std::string, Seconds> nearestRechargeStation(const MapGraph& g, std::string_view from);

/// Multiplies coordinates and travel times by `factor`; times are rounded up.
MapGraph scaleMap(const MapGraph& g, ScaleFactor factor);

}  // namespace uavsched

#endif  // UAVSCHED_MAP_HPP
