#ifndef UAVSCHED_DATAGEN_HPP
#define UAVSCHED_DATAGEN_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavsched/domain.hpp"
#include "uavsched/map.hpp"

namespace uavsched {

enum class GeoScale { Lab = 1, Industrial = 8 };

std::string_view toString(GeoScale scale);
/// Accepts "lab" / "industrial". Throws ConfigError.
GeoScale geoScaleFromString(std::string_view name);

inline constexpr int kTaskCounts[] = {30, 50, 100};
inline constexpr int kPredMeans[] = {0, 1, 2};
inline constexpr int kSlackMeans[] = {300, 600, 1200};

inline constexpr Seconds kMinSlack = 100;
inline constexpr Seconds kMaxSlack = 1395;
inline constexpr int kMaxPredecessors = 4;
inline constexpr int kGenerationRetries = 1000;
inline constexpr double kDefaultSpacing = 2.0;

struct DatasetConfig {
  GeoScale scale = GeoScale::Lab;
  int taskCount = 30;
  int predMean = 0;
  int slackMean = 300;
  std::uint64_t seed = 1;
  bool unchecked = false;
  /// Mean release spacing of consecutive tasks, in multiples of one average
  /// task (approach flight plus processing).
  double spacing = kDefaultSpacing;

  /// Throws ConfigError for values outside the benchmark levels unless `unchecked`.
  void validate() const;
  /// d_<scale>_<n>_<pred>_<slack>.json
  std::string fileName() const;
};

/// The base map scaled for the geographical level.
MapGraph mapForScale(const MapGraph& base, GeoScale scale);

/// Seeded synthetic task set on `map` (already at the right scale).
/// Predecessor structure, positions and normalised slack draws depend only
/// on (seed, taskCount, predMean), so the slack levels of one cell share
/// them. Throws GenerationFailure, ConfigError.
TaskSet generateDataset(const DatasetConfig& cfg, const MapGraph& map);

/// Task document with an extra "meta" object describing `cfg`.
std::string datasetDocument(const TaskSet& tasks, const DatasetConfig& cfg);
/// Reads the "meta" object of a dataset document, if any.
std::optional<DatasetConfig> datasetConfigOf(std::string_view document);

/// The 54 benchmark configurations (scale × tasks × pred × slack), all with `seed`.
std::vector<DatasetConfig> suiteConfigs(std::uint64_t seed, double spacing = kDefaultSpacing);

/// Writes all 54 datasets into `dir`; returns the written paths.
std::vector<std::filesystem::path> generateSuite(const MapGraph& base, std::uint64_t seed,
                                                 const std::filesystem::path& dir, double spacing = kDefaultSpacing);

}  // namespace uavsched

#endif  // UAVSCHED_DATAGEN_HPP
