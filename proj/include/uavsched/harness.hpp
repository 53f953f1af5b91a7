#ifndef UAVSCHED_HARNESS_HPP
#define UAVSCHED_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uavsched/datagen.hpp"
#include "uavsched/domain.hpp"
#include "uavsched/map.hpp"
#include "uavsched/pso.hpp"

namespace uavsched {

// Every tunable of a run. The optional JSON config file uses the same keys
// as the command-line flags (fleet, alpha, gamma, min-recharge, ...).
struct HarnessConfig {
  int fleetSize = 3;
  Seconds alpha = 1200;         // battery capacity, battery-seconds
  Seconds gamma = 2700;         // full recharge duration, seconds
  Seconds minRecharge = 270;
  double speed = 1.0;
  std::uint64_t seed = 1;
  std::filesystem::path outDir = "out";
  SwarmConfig swarm;
  Seconds bucketWidth = 60;     // battery histogram bucket
  double spacing = kDefaultSpacing;  // dataset release spacing

  EnergyModel energyModel() const;
};

/// Merges a JSON config document into `cfg`. Throws ConfigError.
void applyConfigJson(HarnessConfig& cfg, std::string_view document);

struct DatasetInput {
  std::string name;
  DatasetConfig meta;
  TaskSet tasks;
};

struct AttemptRow {
  std::string dataset;
  DatasetConfig meta;
  int rep = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  bool valid = false;
  Seconds energy = 0;
  Seconds makespan = 0;
  int generations = 0;
  std::size_t evaluations = 0;
  double minReserveMargin = 0.0;  // battery-seconds above reserve, worst boundary
  double elapsedMs = 0.0;         // wall clock of optimize(); kept out of the deterministic tables
};

struct SummaryRow {
  std::string dataset;
  DatasetConfig meta;
  int attempts = 0;
  int feasible = 0;
  double meanEnergy = 0.0;
  Seconds minEnergy = 0;
  Seconds maxEnergy = 0;
  double meanMakespan = 0.0;
  double meanElapsedMs = 0.0;
};

struct ExperimentResults {
  std::vector<AttemptRow> attempts;
  std::vector<SummaryRow> summary;
  /// (scale, taskCount) -> bucket index -> count of post-task battery samples.
  std::map<std::pair<std::string, int>, std::map<long, std::uint64_t>> histograms;
  Seconds bucketWidth = 60;
  /// Boundary readings checked against the reserve, and how many fell short.
  std::uint64_t boundaryReadings = 0;
  std::uint64_t boundaryShortfalls = 0;
};

/// Runs optimize() `repetitions` times per dataset with seeds seed..seed+reps-1.
/// Every feasible schedule met during the search is validated before its
/// post-task battery samples enter the histogram.
ExperimentResults runExperiment(const std::vector<DatasetInput>& datasets, const MapGraph& baseMap,
                                const HarnessConfig& cfg, int repetitions);

/// Reads every dataset file of a directory (sorted by name).
std::vector<DatasetInput> loadDatasetDir(const std::filesystem::path& dir);

/// attempts.csv, summary.csv, battery_counts.csv, timing.csv.
void writeResults(const ExperimentResults& r, const std::filesystem::path& dir);
/// Inverse of writeResults (timing included when present).
ExperimentResults readResults(const std::filesystem::path& dir);

/// battery_hist_<scale>_<n>.csv, energy_by_setting.csv, comp_time.csv.
void exportPlots(const ExperimentResults& r, const std::filesystem::path& dir);

/// Setting number 1..9 for (predMean, slackMean), or 0 if off the grid.
int settingOf(int predMean, int slackMean);

}  // namespace uavsched

#endif  // UAVSCHED_HARNESS_HPP
