#include "uavsched/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "uavsched/errors.hpp"
#include "uavsched/validator.hpp"

namespace uavsched {

namespace {

std::string readFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + p.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream openOut(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  out << std::fixed;
  return out;
}

std::vector<std::vector<std::string>> readCsv(const std::filesystem::path& p) {
  std::vector<std::vector<std::string>> rows;
  if (!std::filesystem::exists(p)) return rows;
  std::istringstream in(readFile(p));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (!line.empty() && line.back() == ',') cols.emplace_back();
    rows.push_back(std::move(cols));
  }
  return rows;
}

void writeMeta(std::ostream& out, const DatasetConfig& m) {
  out << toString(m.scale) << ',' << m.taskCount << ',' << m.predMean << ',' << m.slackMean;
}

DatasetConfig metaFrom(const std::vector<std::string>& cols, std::size_t at) {
  DatasetConfig m;
  m.scale = geoScaleFromString(cols.at(at));
  m.taskCount = std::stoi(cols.at(at + 1));
  m.predMean = std::stoi(cols.at(at + 2));
  m.slackMean = std::stoi(cols.at(at + 3));
  m.unchecked = true;
  return m;
}

struct AttemptOutcome {
  AttemptRow row;
  std::map<long, std::uint64_t> hist;
  std::uint64_t readings = 0;
  std::uint64_t shortfalls = 0;
};

AttemptOutcome runAttempt(const DatasetInput& d, const MapGraph& map, const HarnessConfig& cfg, int rep) {
  AttemptOutcome o;
  auto& row = o.row;
  row.dataset = d.name;
  row.meta = d.meta;
  row.rep = rep;
  row.seed = cfg.seed + static_cast<std::uint64_t>(rep);

  const auto energy = cfg.energyModel();
  const auto fleet = makeFleet(cfg.fleetSize, map, cfg.alpha);
  SwarmConfig swarm = cfg.swarm;
  swarm.rngSeed = row.seed;

  auto hook = [&](const std::vector<int>&, const Schedule& s) {
    const auto report = validateSchedule(s, d.tasks, fleet, map, energy);
    if (!report.ok) return;
    for (const auto& u : report.trace.uavs)
      for (double level : u.afterTask)
        ++o.hist[static_cast<long>(std::floor(level / static_cast<double>(cfg.bucketWidth)))];
  };

  const auto start = std::chrono::steady_clock::now();
  try {
    const auto res = optimize(d.tasks, fleet, map, energy, swarm, hook);
    row.elapsedMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    row.feasible = true;
    row.energy = res.energy;
    row.makespan = res.schedule.makespan();
    row.generations = static_cast<int>(res.log.size()) - 1;
    row.evaluations = res.evaluations;
    const auto report = validateSchedule(res.schedule, d.tasks, fleet, map, energy);
    row.valid = report.ok && report.energy == res.energy;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& u : report.trace.uavs)
      for (const auto& pt : u.points) {
        const Level reserve(map.reserve(map.index(pt.position)));
        ++o.readings;
        if (pt.level <= 0 || pt.level < reserve) ++o.shortfalls;
        margin = std::min(margin, toDouble(pt.level - reserve));
      }
    row.minReserveMargin = std::isfinite(margin) ? margin : 0.0;
  } catch (const NoFeasibleFound&) {
    row.elapsedMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return o;
}

}  // namespace

EnergyModel HarnessConfig::energyModel() const {
  EnergyModel e;
  e.fullRechargeDuration = gamma;
  e.minRechargeFragment = minRecharge;
  return e;
}

void applyConfigJson(HarnessConfig& cfg, std::string_view document) {
  try {
    const auto j = nlohmann::json::parse(document);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
      if (key == "fleet") cfg.fleetSize = v.get<int>();
      else if (key == "alpha") cfg.alpha = v.get<Seconds>();
      else if (key == "gamma") cfg.gamma = v.get<Seconds>();
      else if (key == "min-recharge") cfg.minRecharge = v.get<Seconds>();
      else if (key == "speed") cfg.speed = v.get<double>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "out-dir") cfg.outDir = v.get<std::string>();
      else if (key == "particles") cfg.swarm.particleCount = v.get<int>();
      else if (key == "generations") cfg.swarm.maxGenerations = v.get<int>();
      else if (key == "no-improvement") cfg.swarm.noImprovementStop = v.get<int>();
      else if (key == "c1") cfg.swarm.c1 = v.get<double>();
      else if (key == "c2") cfg.swarm.c2 = v.get<double>();
      else if (key == "inertia") cfg.swarm.inertia = v.get<double>();
      else if (key == "threads") cfg.swarm.threads = v.get<int>();
      else if (key == "bucket") cfg.bucketWidth = v.get<Seconds>();
      else if (key == "spacing") cfg.spacing = v.get<double>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::vector<DatasetInput> loadDatasetDir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<DatasetInput> out;
  for (const auto& f : files) {
    const auto text = readFile(f);
    DatasetInput d;
    d.name = f.stem().string();
    auto meta = datasetConfigOf(text);
    d.tasks = parseTaskSet(text);
    if (meta) {
      d.meta = *meta;
    } else {
      d.meta.unchecked = true;
      d.meta.taskCount = static_cast<int>(d.tasks.size());
    }
    out.push_back(std::move(d));
  }
  return out;
}

ExperimentResults runExperiment(const std::vector<DatasetInput>& datasets, const MapGraph& baseMap,
                                const HarnessConfig& cfg, int repetitions) {
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  cfg.swarm.validate();
  const MapGraph lab = mapForScale(baseMap, GeoScale::Lab);
  const MapGraph industrial = mapForScale(baseMap, GeoScale::Industrial);

  struct Job {
    std::size_t dataset;
    int rep;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < datasets.size(); ++i)
    for (int r = 0; r < repetitions; ++r) jobs.push_back({i, r});

  // Attempts fan out over the worker threads; each attempt itself then runs
  // single-threaded so results do not depend on the split.
  HarnessConfig inner = cfg;
  const auto workers = std::max(1, std::min<int>(cfg.swarm.threads, static_cast<int>(jobs.size())));
  if (workers > 1) inner.swarm.threads = 1;

  std::vector<AttemptOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (auto i = next++; i < jobs.size(); i = next++) {
      const auto& d = datasets[jobs[i].dataset];
      outcomes[i] = runAttempt(d, d.meta.scale == GeoScale::Lab ? lab : industrial, inner, jobs[i].rep);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  ExperimentResults r;
  r.bucketWidth = cfg.bucketWidth;
  for (auto& o : outcomes) {
    auto& h = r.histograms[{std::string(toString(o.row.meta.scale)), o.row.meta.taskCount}];
    for (const auto& [b, c] : o.hist) h[b] += c;
    r.boundaryReadings += o.readings;
    r.boundaryShortfalls += o.shortfalls;
    r.attempts.push_back(std::move(o.row));
  }
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    SummaryRow s;
    s.dataset = datasets[i].name;
    s.meta = datasets[i].meta;
    double energy = 0, makespan = 0, elapsed = 0;
    for (const auto& a : r.attempts) {
      if (a.dataset != s.dataset) continue;
      ++s.attempts;
      elapsed += a.elapsedMs;
      if (!a.feasible) continue;
      if (s.feasible == 0 || a.energy < s.minEnergy) s.minEnergy = a.energy;
      if (s.feasible == 0 || a.energy > s.maxEnergy) s.maxEnergy = a.energy;
      ++s.feasible;
      energy += static_cast<double>(a.energy);
      makespan += static_cast<double>(a.makespan);
    }
    if (s.feasible > 0) {
      s.meanEnergy = energy / s.feasible;
      s.meanMakespan = makespan / s.feasible;
    }
    if (s.attempts > 0) s.meanElapsedMs = elapsed / s.attempts;
    r.summary.push_back(s);
  }
  return r;
}

void writeResults(const ExperimentResults& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = openOut(dir / "attempts.csv");
    out << "dataset,scale,tasks,pred_mean,slack_mean,rep,seed,feasible,valid,energy,makespan,generations,"
           "evaluations,min_reserve_margin\n";
    for (const auto& a : r.attempts) {
      out << a.dataset << ',';
      writeMeta(out, a.meta);
      out << ',' << a.rep << ',' << a.seed << ',' << a.feasible << ',' << a.valid << ',' << a.energy << ','
          << a.makespan << ',' << a.generations << ',' << a.evaluations << ',' << std::setprecision(2)
          << a.minReserveMargin << '\n';
    }
  }
  {
    auto out = openOut(dir / "summary.csv");
    out << "dataset,scale,tasks,pred_mean,slack_mean,attempts,feasible,mean_energy,min_energy,max_energy,"
           "mean_makespan\n";
    for (const auto& s : r.summary) {
      out << s.dataset << ',';
      writeMeta(out, s.meta);
      out << ',' << s.attempts << ',' << s.feasible << ',' << std::setprecision(2) << s.meanEnergy << ','
          << s.minEnergy << ',' << s.maxEnergy << ',' << s.meanMakespan << '\n';
    }
  }
  {
    auto out = openOut(dir / "battery_counts.csv");
    out << "scale,tasks,bucket_start,bucket_end,count\n";
    for (const auto& [key, hist] : r.histograms)
      for (const auto& [b, c] : hist)
        out << key.first << ',' << key.second << ',' << b * r.bucketWidth << ',' << (b + 1) * r.bucketWidth << ','
            << c << '\n';
  }
  {
    auto out = openOut(dir / "battery_reserve.csv");
    out << "readings,shortfalls\n" << r.boundaryReadings << ',' << r.boundaryShortfalls << '\n';
  }
  {
    auto out = openOut(dir / "timing.csv");
    out << "dataset,rep,elapsed_ms\n";
    for (const auto& a : r.attempts) out << a.dataset << ',' << a.rep << ',' << std::setprecision(3) << a.elapsedMs << '\n';
  }
}

ExperimentResults readResults(const std::filesystem::path& dir) {
  ExperimentResults r;
  for (const auto& c : readCsv(dir / "attempts.csv")) {
    AttemptRow a;
    a.dataset = c.at(0);
    a.meta = metaFrom(c, 1);
    a.rep = std::stoi(c.at(5));
    a.seed = std::stoull(c.at(6));
    a.feasible = c.at(7) == "1";
    a.valid = c.at(8) == "1";
    a.energy = std::stoll(c.at(9));
    a.makespan = std::stoll(c.at(10));
    a.generations = std::stoi(c.at(11));
    a.evaluations = std::stoull(c.at(12));
    a.minReserveMargin = std::stod(c.at(13));
    r.attempts.push_back(a);
  }
  for (const auto& c : readCsv(dir / "summary.csv")) {
    SummaryRow s;
    s.dataset = c.at(0);
    s.meta = metaFrom(c, 1);
    s.attempts = std::stoi(c.at(5));
    s.feasible = std::stoi(c.at(6));
    s.meanEnergy = std::stod(c.at(7));
    s.minEnergy = std::stoll(c.at(8));
    s.maxEnergy = std::stoll(c.at(9));
    s.meanMakespan = std::stod(c.at(10));
    r.summary.push_back(s);
  }
  for (const auto& c : readCsv(dir / "battery_counts.csv")) {
    const auto start = std::stoll(c.at(2));
    const auto end = std::stoll(c.at(3));
    r.bucketWidth = end - start;
    r.histograms[{c.at(0), std::stoi(c.at(1))}][static_cast<long>(start / r.bucketWidth)] += std::stoull(c.at(4));
  }
  for (const auto& c : readCsv(dir / "battery_reserve.csv")) {
    r.boundaryReadings = std::stoull(c.at(0));
    r.boundaryShortfalls = std::stoull(c.at(1));
  }
  std::map<std::string, std::vector<double>> times;
  for (const auto& c : readCsv(dir / "timing.csv")) {
    for (auto& a : r.attempts)
      if (a.dataset == c.at(0) && a.rep == std::stoi(c.at(1))) a.elapsedMs = std::stod(c.at(2));
    times[c.at(0)].push_back(std::stod(c.at(2)));
  }
  for (auto& s : r.summary) {
    const auto& t = times[s.dataset];
    if (!t.empty()) {
      double sum = 0;
      for (double x : t) sum += x;
      s.meanElapsedMs = sum / static_cast<double>(t.size());
    }
  }
  return r;
}

int settingOf(int predMean, int slackMean) {
  for (int p = 0; p < 3; ++p)
    for (int s = 0; s < 3; ++s)
      if (kPredMeans[p] == predMean && kSlackMeans[s] == slackMean) return p * 3 + s + 1;
  return 0;
}

void exportPlots(const ExperimentResults& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto hists = r.histograms;
  for (auto scale : {GeoScale::Lab, GeoScale::Industrial})
    for (int n : kTaskCounts) hists[{std::string(toString(scale)), n}];
  for (const auto& [key, hist] : hists) {
    auto out = openOut(dir / ("battery_hist_" + key.first + "_" + std::to_string(key.second) + ".csv"));
    out << "bucket_start,bucket_end,count\n";
    for (const auto& [b, c] : hist) out << b * r.bucketWidth << ',' << (b + 1) * r.bucketWidth << ',' << c << '\n';
  }
  {
    auto out = openOut(dir / "energy_by_setting.csv");
    out << "scale,tasks,setting,pred_mean,slack_mean,mean_energy,feasible\n";
    for (const auto& s : r.summary) {
      const int setting = settingOf(s.meta.predMean, s.meta.slackMean);
      if (setting == 0) continue;
      out << toString(s.meta.scale) << ',' << s.meta.taskCount << ',' << setting << ',' << s.meta.predMean << ','
          << s.meta.slackMean << ',' << std::setprecision(2) << s.meanEnergy << ',' << s.feasible << '\n';
    }
  }
  {
    auto out = openOut(dir / "comp_time.csv");
    out << "scale,tasks,pred_mean,slack_mean,mean_ms\n";
    for (const auto& s : r.summary) {
      writeMeta(out, s.meta);
      out << ',' << std::setprecision(3) << s.meanElapsedMs << '\n';
    }
  }
}

}  // namespace uavsched
