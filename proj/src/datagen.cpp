#include "uavsched/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "uavsched/errors.hpp"

namespace uavsched {

namespace {

template <typename Range>
bool oneOf(int v, const Range& r) {
  return std::find(std::begin(r), std::end(r), v) != std::end(r);
}

struct Draft {
  PosIndex start = -1;
  PosIndex end = -1;
  Seconds processing = 0;
  std::vector<int> preds;  // 0-based indices of earlier tasks
  double slackZ = 0.0;
  Seconds jitter = 0;
  Seconds chainGap = 0;
};

// Everything that does not depend on the slack level.
std::vector<Draft> drawStructure(const DatasetConfig& cfg, const MapGraph& map, const std::vector<PosIndex>& sites,
                                 Seconds tau, int attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(cfg.taskCount), static_cast<std::uint32_t>(cfg.predMean),
                    static_cast<std::uint32_t>(attempt)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
  std::bernoulli_distribution coin(0.5);

  const auto n = static_cast<std::size_t>(cfg.taskCount);
  const double sigma = std::min(1.0, static_cast<double>(cfg.predMean));
  std::vector<Draft> out(n);
  std::vector<std::vector<bool>> ancestor(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    auto& d = out[i];
    d.start = sites[pick(rng)];
    if (coin(rng)) {
      do {
        d.end = sites[pick(rng)];
      } while (d.end == d.start);
      d.processing = 30 + map.travel(d.start, d.end);
    } else {
      d.end = d.start;
      d.processing = 10;
    }
    const double predDraw = std::round(static_cast<double>(cfg.predMean) + sigma * gauss(rng));
    const auto want = std::min<std::size_t>(i, static_cast<std::size_t>(std::clamp(predDraw, 0.0, double{kMaxPredecessors})));
    d.slackZ = gauss(rng);
    d.jitter = std::uniform_int_distribution<Seconds>(0, std::max<Seconds>(0, tau / 2))(rng);
    d.chainGap = std::uniform_int_distribution<Seconds>(0, 30)(rng);

    // Predecessors form an antichain among earlier tasks, so no edge is
    // implied by another; recent tasks are preferred to keep chains local.
    std::vector<std::size_t> pool(std::min<std::size_t>(i, 12));
    for (std::size_t k = 0; k < pool.size(); ++k) pool[k] = i - 1 - k;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (auto c : pool) {
      if (d.preds.size() >= want) break;
      const bool related = std::any_of(d.preds.begin(), d.preds.end(), [&](int p) {
        return ancestor[c][static_cast<std::size_t>(p)] || ancestor[static_cast<std::size_t>(p)][c];
      });
      if (!related) d.preds.push_back(static_cast<int>(c));
    }
    std::sort(d.preds.begin(), d.preds.end());
    for (int p : d.preds) {
      ancestor[i][static_cast<std::size_t>(p)] = true;
      for (std::size_t a = 0; a < n; ++a)
        if (ancestor[static_cast<std::size_t>(p)][a]) ancestor[i][a] = true;
    }
  }
  return out;
}

}  // namespace

std::string_view toString(GeoScale scale) { return scale == GeoScale::Lab ? "lab" : "industrial"; }

GeoScale geoScaleFromString(std::string_view name) {
  if (name == "lab") return GeoScale::Lab;
  if (name == "industrial") return GeoScale::Industrial;
  throw ConfigError("unknown scale '" + std::string(name) + "' (expected lab or industrial)");
}

void DatasetConfig::validate() const {
  if (taskCount < 1) throw ConfigError("task count must be positive");
  if (predMean < 0 || slackMean < kMinSlack) throw ConfigError("predecessor and slack means out of range");
  if (spacing <= 0) throw ConfigError("release spacing must be positive");
  if (unchecked) return;
  if (!oneOf(taskCount, kTaskCounts)) throw ConfigError("task count must be 30, 50 or 100");
  if (!oneOf(predMean, kPredMeans)) throw ConfigError("predecessor mean must be 0, 1 or 2");
  if (!oneOf(slackMean, kSlackMeans)) throw ConfigError("slack mean must be 300, 600 or 1200");
}

std::string DatasetConfig::fileName() const {
  return "d_" + std::string(toString(scale)) + "_" + std::to_string(taskCount) + "_" + std::to_string(predMean) + "_" +
         std::to_string(slackMean) + ".json";
}

MapGraph mapForScale(const MapGraph& base, GeoScale scale) {
  return scaleMap(base, {static_cast<std::int64_t>(scale), 1});
}

TaskSet generateDataset(const DatasetConfig& cfg, const MapGraph& map) {
  cfg.validate();
  std::vector<PosIndex> sites;
  for (PosIndex p = 0; p < static_cast<PosIndex>(map.size()); ++p)
    if (!map.isStation(p)) sites.push_back(p);
  if (sites.size() < 2) throw ConfigError("the map needs at least two non-station positions");

  double flight = 0;
  for (auto a : sites)
    for (auto b : sites)
      if (a != b) flight += static_cast<double>(map.travel(a, b));
  flight /= static_cast<double>(sites.size() * (sites.size() - 1));
  const double avgTask = flight + 0.5 * 10.0 + 0.5 * (30.0 + flight);
  const auto tau = static_cast<Seconds>(std::ceil(cfg.spacing * avgTask));

  for (int attempt = 0; attempt < kGenerationRetries; ++attempt) {
    const auto drafts = drawStructure(cfg, map, sites, tau, attempt);
    std::vector<Task> tasks;
    std::vector<Seconds> due;
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      const auto& d = drafts[i];
      const double mean = static_cast<double>(cfg.slackMean);
      const auto slack = std::clamp(static_cast<Seconds>(std::llround(mean + mean / 5.0 * d.slackZ)), kMinSlack, kMaxSlack);
      Seconds release = static_cast<Seconds>(i) * tau + d.jitter;
      for (int p : d.preds) release = std::max(release, due[static_cast<std::size_t>(p)] + d.chainGap);
      Task t;
      t.id = static_cast<int>(i) + 1;
      t.startPos = map.id(d.start);
      t.endPos = map.id(d.end);
      t.processingTime = d.processing;
      t.hasTimeWindow = true;
      t.releaseDate = release;
      t.dueDate = release + d.processing + slack;
      for (int p : d.preds) t.predecessors.push_back(p + 1);
      due.push_back(t.dueDate);
      tasks.push_back(std::move(t));
    }
    try {
      return TaskSet(std::move(tasks));
    } catch (const Error&) {
      continue;
    }
  }
  throw GenerationFailure("could not generate a consistent dataset for " + cfg.fileName());
}

std::string datasetDocument(const TaskSet& tasks, const DatasetConfig& cfg) {
  auto doc = nlohmann::ordered_json::parse(serializeTaskSet(tasks));
  nlohmann::ordered_json meta;
  meta["scale"] = std::string(toString(cfg.scale));
  meta["tasks"] = cfg.taskCount;
  meta["pred_mean"] = cfg.predMean;
  meta["slack_mean"] = cfg.slackMean;
  meta["seed"] = cfg.seed;
  meta["spacing"] = cfg.spacing;
  doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

std::optional<DatasetConfig> datasetConfigOf(std::string_view document) {
  try {
    const auto doc = nlohmann::json::parse(document);
    if (!doc.contains("meta")) return std::nullopt;
    const auto& m = doc.at("meta");
    DatasetConfig c;
    c.scale = geoScaleFromString(m.at("scale").get<std::string>());
    c.taskCount = m.at("tasks").get<int>();
    c.predMean = m.at("pred_mean").get<int>();
    c.slackMean = m.at("slack_mean").get<int>();
    c.seed = m.at("seed").get<std::uint64_t>();
    if (m.contains("spacing")) c.spacing = m.at("spacing").get<double>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dataset meta: ") + e.what());
  }
}

std::vector<DatasetConfig> suiteConfigs(std::uint64_t seed, double spacing) {
  std::vector<DatasetConfig> out;
  for (auto scale : {GeoScale::Lab, GeoScale::Industrial})
    for (int n : kTaskCounts)
      for (int pred : kPredMeans)
        for (int slack : kSlackMeans) out.push_back({scale, n, pred, slack, seed, false, spacing});
  return out;
}

std::vector<std::filesystem::path> generateSuite(const MapGraph& base, std::uint64_t seed,
                                                 const std::filesystem::path& dir, double spacing) {
  std::filesystem::create_directories(dir);
  const MapGraph lab = mapForScale(base, GeoScale::Lab);
  const MapGraph industrial = mapForScale(base, GeoScale::Industrial);
  std::vector<std::filesystem::path> out;
  for (const auto& cfg : suiteConfigs(seed, spacing)) {
    const auto& map = cfg.scale == GeoScale::Lab ? lab : industrial;
    const auto path = dir / cfg.fileName();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << datasetDocument(generateDataset(cfg, map), cfg);
    out.push_back(path);
  }
  return out;
}

}  // namespace uavsched
