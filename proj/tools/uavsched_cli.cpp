// uavsched command-line front end.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavsched/datagen.hpp"
#include "uavsched/errors.hpp"
#include "uavsched/harness.hpp"
#include "uavsched/oracle.hpp"
#include "uavsched/pso.hpp"
#include "uavsched/validator.hpp"

using namespace uavsched;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text << '\n';
}

struct Globals {
  HarnessConfig cfg;
  std::string configPath;
  std::optional<double> speed;
};

MapGraph loadBaseMap(const std::string& path, const Globals& g) {
  auto doc = nlohmann::json::parse(slurp(path), nullptr, false);
  if (doc.is_discarded()) throw ParseError("map '" + path + "' is not valid JSON");
  if (g.speed) doc["speed"] = *g.speed;
  return loadMap(doc.dump());
}

// Tasks plus the map at the scale recorded in the dataset (lab when unrecorded).
std::pair<TaskSet, MapGraph> loadDataset(const std::string& path, const MapGraph& base) {
  if (path.ends_with(".csv")) return {loadTaskSetFile(path), mapForScale(base, GeoScale::Lab)};
  const auto text = slurp(path);
  const auto meta = datasetConfigOf(text);
  return {parseTaskSet(text), mapForScale(base, meta ? meta->scale : GeoScale::Lab)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Battery-aware multi-UAV task scheduling"};
  app.require_subcommand(1);
  Globals g;
  auto& cfg = g.cfg;
  std::string outDir;
  app.add_option("--config", g.configPath, "JSON file with any of the global options");
  app.add_option("--fleet", cfg.fleetSize, "number of UAVs")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "battery capacity in battery-seconds")->capture_default_str();
  app.add_option("--gamma", cfg.gamma, "full recharge duration in seconds")->capture_default_str();
  app.add_option("--min-recharge", cfg.minRecharge, "minimum recharge duration in seconds")->capture_default_str();
  app.add_option("--speed", g.speed, "flight speed used for edges without explicit times");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--out-dir", outDir, "output directory");
  app.add_option("--particles", cfg.swarm.particleCount)->capture_default_str();
  app.add_option("--generations", cfg.swarm.maxGenerations)->capture_default_str();
  app.add_option("--threads", cfg.swarm.threads)->capture_default_str();

  // gen-data
  auto* genData = app.add_subcommand("gen-data", "generate one synthetic dataset");
  DatasetConfig dc;
  std::string scale = "lab", mapPath, outPath;
  genData->add_option("--scale", scale, "lab or industrial")->capture_default_str();
  genData->add_option("--tasks", dc.taskCount)->capture_default_str();
  genData->add_option("--pred-mean", dc.predMean)->capture_default_str();
  genData->add_option("--slack-mean", dc.slackMean)->capture_default_str();
  genData->add_option("--spacing", dc.spacing)->capture_default_str();
  genData->add_flag("--unchecked", dc.unchecked, "allow values off the benchmark grid");
  genData->add_option("--map", mapPath)->required();
  genData->add_option("--out", outPath, "output file (default stdout)");

  // gen-suite
  auto* genSuite = app.add_subcommand("gen-suite", "generate the 54 benchmark datasets");
  genSuite->add_option("--map", mapPath)->required();
  double suiteSpacing = kDefaultSpacing;
  genSuite->add_option("--spacing", suiteSpacing)->capture_default_str();

  // schedule
  auto* schedule = app.add_subcommand("schedule", "optimize a dataset and print the best schedule");
  std::string datasetPath, logPath;
  std::vector<int> sequence;
  schedule->add_option("dataset", datasetPath)->required();
  schedule->add_option("map", mapPath)->required();
  schedule->add_option("--sequence", sequence, "schedule this task order only (no optimization)")->delimiter(',');
  schedule->add_option("--out", outPath, "schedule file (default stdout)");
  schedule->add_option("--log", logPath, "per-generation CSV log");

  // validate
  auto* validate = app.add_subcommand("validate", "audit a schedule; exit 1 on violations");
  std::string schedulePath;
  validate->add_option("schedule", schedulePath)->required();
  validate->add_option("dataset", datasetPath)->required();
  validate->add_option("map", mapPath)->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum of a small instance");
  OracleLimits limits;
  oracle->add_option("dataset", datasetPath)->required();
  oracle->add_option("map", mapPath)->required();
  oracle->add_option("--max-tasks", limits.maxTasks)->capture_default_str();
  oracle->add_option("--max-uavs", limits.maxUavs)->capture_default_str();
  oracle->add_option("--time-budget", limits.timeBudgetSeconds, "seconds")->capture_default_str();
  oracle->add_option("--out", outPath, "schedule file");

  // bench
  auto* bench = app.add_subcommand("bench", "run the experiment over a dataset directory");
  std::string suiteDir;
  int reps = 20;
  bench->add_option("--suite", suiteDir, "directory of dataset files")->required();
  bench->add_option("--map", mapPath)->required();
  bench->add_option("--reps", reps)->capture_default_str();

  // export-plots
  auto* plots = app.add_subcommand("export-plots", "turn bench results into plot tables");
  std::string resultsDir;
  plots->add_option("--results", resultsDir, "bench output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!g.configPath.empty()) {
      // Explicit flags win over the config file.
      HarnessConfig fromFile;
      applyConfigJson(fromFile, slurp(g.configPath));
      auto keep = [&](const char* flag, auto& field, const auto& value) {
        if (app.count(flag) == 0) field = value;
      };
      keep("--fleet", cfg.fleetSize, fromFile.fleetSize);
      keep("--alpha", cfg.alpha, fromFile.alpha);
      keep("--gamma", cfg.gamma, fromFile.gamma);
      keep("--min-recharge", cfg.minRecharge, fromFile.minRecharge);
      keep("--seed", cfg.seed, fromFile.seed);
      keep("--particles", cfg.swarm.particleCount, fromFile.swarm.particleCount);
      keep("--generations", cfg.swarm.maxGenerations, fromFile.swarm.maxGenerations);
      keep("--threads", cfg.swarm.threads, fromFile.swarm.threads);
      cfg.swarm.noImprovementStop = fromFile.swarm.noImprovementStop;
      cfg.swarm.c1 = fromFile.swarm.c1;
      cfg.swarm.c2 = fromFile.swarm.c2;
      cfg.swarm.inertia = fromFile.swarm.inertia;
      cfg.bucketWidth = fromFile.bucketWidth;
      cfg.spacing = fromFile.spacing;
      if (app.count("--speed") == 0 && fromFile.speed != 1.0) g.speed = fromFile.speed;
      if (outDir.empty()) outDir = fromFile.outDir.string();
    }
    if (outDir.empty()) outDir = "out";
    cfg.outDir = outDir;
    const auto energy = cfg.energyModel();
    validateEnergyModel(energy);

    if (genData->parsed()) {
      dc.scale = geoScaleFromString(scale);
      dc.seed = cfg.seed;
      const auto base = loadBaseMap(mapPath, g);
      const auto map = mapForScale(base, dc.scale);
      emit(datasetDocument(generateDataset(dc, map), dc), outPath);
      return 0;
    }
    if (genSuite->parsed()) {
      if (genSuite->count("--spacing") > 0) cfg.spacing = suiteSpacing;
      const auto files = generateSuite(loadBaseMap(mapPath, g), cfg.seed, cfg.outDir, cfg.spacing);
      std::cout << "wrote " << files.size() << " datasets to " << cfg.outDir.string() << '\n';
      return 0;
    }
    if (schedule->parsed()) {
      const auto [tasks, map] = loadDataset(datasetPath, loadBaseMap(mapPath, g));
      const auto fleet = makeFleet(cfg.fleetSize, map, cfg.alpha);
      if (!sequence.empty()) {
        const auto s = scheduleSequence(sequence, tasks, fleet, map, energy);
        if (!s) {
          std::cerr << "no feasible schedule for this sequence\n";
          return 1;
        }
        emit(serializeSchedule(*s), outPath);
        return 0;
      }
      SwarmConfig swarm = cfg.swarm;
      swarm.rngSeed = cfg.seed;
      const auto res = optimize(tasks, fleet, map, energy, swarm);
      if (!logPath.empty()) emit(logToCsv(res.log), logPath);
      emit(serializeSchedule(res.schedule), outPath);
      return 0;
    }
    if (validate->parsed()) {
      const auto [tasks, map] = loadDataset(datasetPath, loadBaseMap(mapPath, g));
      const auto fleet = makeFleet(cfg.fleetSize, map, cfg.alpha);
      const auto report = validateSchedule(parseSchedule(slurp(schedulePath)), tasks, fleet, map, energy);
      std::cout << reportToJson(report) << '\n';
      return report.ok ? 0 : 1;
    }
    if (oracle->parsed()) {
      const auto [tasks, map] = loadDataset(datasetPath, loadBaseMap(mapPath, g));
      const auto fleet = makeFleet(cfg.fleetSize, map, cfg.alpha);
      const auto r = bruteForceOptimal(tasks, fleet, map, energy, limits);
      nlohmann::ordered_json out;
      out["optimal"] = r.energy && !r.exhausted;
      out["exhausted"] = r.exhausted;
      out["energy"] = r.energy ? nlohmann::ordered_json(*r.energy) : nlohmann::ordered_json();
      out["nodes"] = r.nodes;
      out["limitations"] = std::string(oracleLimitations());
      std::cout << out.dump(2) << '\n';
      if (r.schedule && !outPath.empty()) emit(serializeSchedule(*r.schedule), outPath);
      return r.energy ? 0 : 1;
    }
    if (bench->parsed()) {
      const auto datasets = loadDatasetDir(suiteDir);
      const auto results = runExperiment(datasets, loadBaseMap(mapPath, g), cfg, reps);
      writeResults(results, cfg.outDir);
      std::cout << results.attempts.size() << " attempts written to " << cfg.outDir.string() << '\n';
      return 0;
    }
    if (plots->parsed()) {
      exportPlots(readResults(resultsDir), cfg.outDir);
      std::cout << "plot tables written to " << cfg.outDir.string() << '\n';
      return 0;
    }
  } catch (const NoFeasibleFound& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
