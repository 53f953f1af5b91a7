// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "fixtures.hpp"
#include "uavsched/datagen.hpp"
#include "uavsched/errors.hpp"
#include "uavsched/harness.hpp"
#include "uavsched/oracle.hpp"
#include "uavsched/pso.hpp"
#include "uavsched/rtaa.hpp"
#include "uavsched/validator.hpp"

using namespace uavsched;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned thresholds.
constexpr double kRuleSecondsMax = 1.0;
constexpr int kSuiteSeeds = 3;
constexpr double kSuiteSecondsMax = 3600.0;
constexpr int kBenchReps = 20;
constexpr std::uint64_t kBenchSeed = 1;
constexpr int kTrendCellsMin = 14;
constexpr int kOracleInstances = 20;
constexpr double kOracleBudgetSeconds = 25.0;
constexpr double kOracleSecondsMax = 600.0;
constexpr double kGapFlag = 0.15;
constexpr double kLargeRunSecondsMax = 600.0;

double secondsSince(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fileText(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Verdict {
  std::string id;
  bool pass = false;
  std::string detail;
};

std::vector<Verdict> verdicts;

void report(const std::string& id, bool pass, const std::string& detail) {
  verdicts.push_back({id, pass, detail});
  std::cout << id << ' ' << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
}

std::string fmt(double v, int decimals = 2) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(decimals);
  o << v;
  return o.str();
}

// Reference instance against the published rule rows.
void ruleGoldens() {
  const auto ts = fixtures::table1();
  const std::vector<std::pair<PriorityRule, std::vector<int>>> rows = {
      {PriorityRule::MinCumulativePredecessors, {5, 8, 1, 9, 10, 2, 4, 7, 3, 6}},
      {PriorityRule::MinDirectPredecessors, {5, 8, 1, 2, 3, 4, 6, 9, 10, 7}},
      {PriorityRule::MaxCumulativeSuccessors, {8, 5, 9, 10, 7, 1, 2, 3, 4, 6}},
      {PriorityRule::MaxDirectSuccessors, {7, 8, 9, 10, 5, 1, 2, 3, 4, 6}},
      {PriorityRule::MaxProcessingTime, {10, 4, 3, 6, 9, 1, 2, 5, 7, 8}},
      {PriorityRule::MinProcessingTime, {1, 2, 5, 7, 8, 6, 9, 3, 4, 10}},
  };
  const auto start = Clock::now();
  int matched = 0;
  std::string misses;
  for (const auto& [rule, want] : rows) {
    if (prioritySequence(rule, ts) == want)
      ++matched;
    else
      misses += std::string(" ") + std::string(toString(rule));
  }
  const double secs = secondsSince(start);
  report("AC1", matched == 6 && secs < kRuleSecondsMax,
         std::to_string(matched) + "/6 rule sequences match, " + fmt(secs, 4) + " s" + misses);
}

struct BenchOutcome {
  ExperimentResults results;
  double seconds = 0;
};

BenchOutcome bench(const std::vector<DatasetInput>& datasets, const MapGraph& base, const fs::path& out) {
  HarnessConfig cfg;
  cfg.seed = kBenchSeed;
  const auto start = Clock::now();
  BenchOutcome b{runExperiment(datasets, base, cfg, kBenchReps), 0};
  b.seconds = secondsSince(start);
  writeResults(b.results, out);
  exportPlots(b.results, out / "plots");
  return b;
}

void feasibilitySuite(const ExperimentResults& r) {
  int attempts = 0, feasible = 0, valid = 0;
  double ms = 0;
  for (const auto& a : r.attempts) {
    if (a.rep >= kSuiteSeeds) continue;
    ++attempts;
    ms += a.elapsedMs;
    if (a.feasible) ++feasible;
    if (a.feasible && a.valid) ++valid;
  }
  const double secs = ms / 1000.0;
  report("AC2", attempts == 54 * kSuiteSeeds && valid == attempts && secs <= kSuiteSecondsMax,
         std::to_string(valid) + "/" + std::to_string(attempts) + " attempts returned a validated schedule (" +
             std::to_string(feasible) + " feasible), optimize time " + fmt(secs, 1) + " s");
}

void batteryPreservation(const ExperimentResults& r) {
  std::map<long, std::uint64_t> all;
  for (const auto& [key, hist] : r.histograms)
    for (const auto& [b, c] : hist) all[b] += c;
  std::cout << "  post-task battery histogram (bucket " << r.bucketWidth << " battery-seconds, all cells):\n";
  for (const auto& [b, c] : all)
    std::cout << "    [" << b * r.bucketWidth << ", " << (b + 1) * r.bucketWidth << ")  " << c << '\n';
  report("AC3", r.boundaryReadings > 0 && r.boundaryShortfalls == 0,
         std::to_string(r.boundaryReadings - r.boundaryShortfalls) + "/" + std::to_string(r.boundaryReadings) +
             " boundary readings at or above the reserve and positive");
}

void slackTrend(const ExperimentResults& r) {
  std::map<std::tuple<std::string, int, int>, std::map<int, double>> cells;
  for (const auto& s : r.summary)
    cells[{std::string(toString(s.meta.scale)), s.meta.taskCount, s.meta.predMean}][s.meta.slackMean] = s.meanEnergy;
  int holds = 0;
  std::string against;
  for (const auto& [key, bySlack] : cells) {
    if (bySlack.count(300) && bySlack.count(1200) && bySlack.at(300) >= bySlack.at(1200))
      ++holds;
    else
      against += " " + std::get<0>(key) + "/" + std::to_string(std::get<1>(key)) + "/" +
                 std::to_string(std::get<2>(key));
  }
  report("AC4", cells.size() == 18 && holds >= kTrendCellsMin,
         std::to_string(holds) + "/" + std::to_string(cells.size()) + " cells with mean energy(300) >= mean energy(1200)" +
             (against.empty() ? "" : "; against:" + against));
}

// Small instances: one UAV with 3-5 tasks, two UAVs with 3-4 tasks.
void oracleDominance(const MapGraph& base) {
  const EnergyModel energy;
  const auto start = Clock::now();
  int compared = 0, bothInfeasible = 0, failures = 0, exhausted = 0;
  double gapSum = 0;
  std::string notes;
  for (int i = 0; i < kOracleInstances; ++i) {
    const int uavs = 1 + i % 2;
    DatasetConfig dc;
    dc.taskCount = uavs == 1 ? 3 + (i / 2) % 3 : 3 + (i / 2) % 2;
    dc.predMean = (i / 2) % 2;
    dc.slackMean = 300;
    dc.seed = 100 + static_cast<std::uint64_t>(i);
    dc.unchecked = true;
    const auto ts = generateDataset(dc, base);
    const auto fleet = makeFleet(uavs, base);
    const auto opt = bruteForceOptimal(ts, fleet, base, energy, {5, 2, kOracleBudgetSeconds});
    if (opt.exhausted) ++exhausted;
    if (opt.schedule && validateSchedule(*opt.schedule, ts, fleet, base, energy).energy != *opt.energy) {
      ++failures;
      notes += " #" + std::to_string(i) + " oracle schedule disagrees with its energy";
    }
    if (opt.schedule && !validateSchedule(*opt.schedule, ts, fleet, base, energy).ok) {
      ++failures;
      notes += " #" + std::to_string(i) + " oracle schedule invalid";
    }

    std::optional<OptimizeResult> heur;
    try {
      heur = optimize(ts, fleet, base, energy, SwarmConfig{});
    } catch (const NoFeasibleFound&) {
    }
    const std::string tag = " #" + std::to_string(i) + "(" + std::to_string(dc.taskCount) + "t/" +
                            std::to_string(uavs) + "u)";
    if (!opt.energy && !heur) {
      ++bothInfeasible;
      continue;
    }
    if (!heur) {
      ++failures;
      notes += tag + " optimize found nothing, optimum " + std::to_string(*opt.energy);
      continue;
    }
    const bool valid = validateSchedule(heur->schedule, ts, fleet, base, energy).ok;
    if (!valid) {
      ++failures;
      notes += tag + " invalid schedule";
      continue;
    }
    if (!opt.energy) {
      if (!opt.exhausted) {
        ++failures;
        notes += tag + " oracle proved infeasible but optimize found " + std::to_string(heur->energy);
      }
      continue;
    }
    if (heur->energy < *opt.energy) {
      ++failures;
      notes += tag + " below the oracle optimum";
      continue;
    }
    ++compared;
    const double gap = static_cast<double>(heur->energy - *opt.energy) / static_cast<double>(*opt.energy);
    gapSum += gap;
  }
  const double secs = secondsSince(start);
  const double meanGap = compared > 0 ? gapSum / compared : 0.0;
  std::string detail = std::to_string(compared) + " compared, " + std::to_string(bothInfeasible) +
                       " infeasible for both, " + std::to_string(exhausted) + " oracle budget hits, mean gap " +
                       fmt(100.0 * meanGap, 1) + "%" + (meanGap > kGapFlag ? " [FLAG: gap above 15%]" : "") + ", " +
                       fmt(secs, 1) + " s";
  if (!notes.empty()) detail += ";" + notes;
  report("AC5", failures == 0 && exhausted == 0 && secs <= kOracleSecondsMax, detail);
}

void largeRun(const fs::path& suiteDir, const MapGraph& base) {
  const auto text = fileText(suiteDir / "d_lab_100_2_300.json");
  const auto ts = parseTaskSet(text);
  const auto fleet = makeFleet(3, base);
  const EnergyModel energy;
  SwarmConfig cfg;  // 40 particles, 40 generations, stop after 10 stale generations
  const auto start = Clock::now();
  bool ok = false;
  std::string detail;
  try {
    const auto r = optimize(ts, fleet, base, energy, cfg);
    ok = validateSchedule(r.schedule, ts, fleet, base, energy).ok;
    detail = "energy " + std::to_string(r.energy) + ", " + std::to_string(r.log.size() - 1) + " generations";
  } catch (const NoFeasibleFound&) {
    detail = "no feasible schedule";
  }
  const double secs = secondsSince(start);
  report("AC6", ok && secs <= kLargeRunSecondsMax,
         "100-task lab dataset: " + detail + ", " + fmt(secs, 1) + " s (limit " + fmt(kLargeRunSecondsMax, 0) + ")");
}

Action act(ActionKind k, Seconds a, Seconds b, const std::string& from, const std::string& to,
           std::optional<int> task = std::nullopt) {
  return {k, {a, b}, from, to, task};
}

bool onlyCheck(const ValidationReport& r, const std::string& id) {
  return !r.ok && std::all_of(r.violations.begin(), r.violations.end(),
                              [&](const Violation& v) { return v.check == id; });
}

void mutations(const MapGraph& base, const fs::path& suiteDir) {
  const EnergyModel energy;
  std::map<std::string, std::pair<int, int>> tally;  // check -> (exact, tried)
  auto record = [&](const std::string& id, const ValidationReport& r) {
    auto& t = tally[id];
    ++t.second;
    if (onlyCheck(r, id)) ++t.first;
  };

  // Hand-built: S station, X and Y 10 s from S and from each other.
  {
    const auto map = fixtures::triangleMap(10, 10, 10);
    const TaskSet ts({fixtures::inspection(1, "X", 0, 200), fixtures::inspection(2, "Y", 0, 400, {1}),
                      fixtures::inspection(3, "X", 0, 400)});
    const auto fleet = fixtures::fleetAt("S", 2);
    using K = ActionKind;
    Schedule valid;
    valid.uavs.push_back({1,
                          {act(K::FlyTo, 0, 10, "S", "X"), act(K::PerformInspection, 10, 20, "X", "X", 1),
                           act(K::FlyTo, 20, 30, "X", "Y"), act(K::PerformInspection, 30, 40, "Y", "Y", 2)}});
    valid.uavs.push_back({2,
                          {act(K::WaitOnGround, 0, 90, "S", "S"), act(K::FlyTo, 90, 100, "S", "X"),
                           act(K::PerformInspection, 100, 110, "X", "X", 3)}});
    valid.reportedEnergy = 60;
    auto check = [&](const Schedule& s) { return validateSchedule(s, ts, fleet, map, energy); };
    if (!check(valid).ok) {
      report("AC7", false, "hand-built base schedule does not validate");
      return;
    }
    auto late = valid;
    late.uavs[0].actions[3] = act(K::PerformInspection, 395, 405, "Y", "Y", 2);
    late.uavs[0].actions.insert(late.uavs[0].actions.begin() + 3, act(K::Hover, 30, 395, "Y", "Y"));
    record("C2", check(late));

    auto overlap = valid;
    overlap.uavs[1].actions = {act(K::WaitOnGround, 0, 5, "S", "S"), act(K::FlyTo, 5, 15, "S", "X"),
                               act(K::PerformInspection, 15, 25, "X", "X", 3)};
    record("C4", check(overlap));

    auto drained = valid;
    drained.uavs[0].actions.push_back(act(K::Hover, 40, 1195, "Y", "Y"));
    record("C7", check(drained));

    auto reversed = valid;
    reversed.uavs[0].actions = {act(K::FlyTo, 0, 10, "S", "Y"), act(K::PerformInspection, 10, 20, "Y", "Y", 2),
                                act(K::FlyTo, 20, 30, "Y", "X"), act(K::PerformInspection, 30, 40, "X", "X", 1)};
    record("C9", check(reversed));
  }

  // Scheduler output on generated datasets. Past due: delay a single-UAV
  // timeline on the ground until one task ends after its due date. Drain:
  // hover after a UAV's last action until one second below the reserve.
  for (const char* name : {"d_lab_30_0_300.json", "d_lab_30_2_600.json", "d_lab_50_1_1200.json",
                           "d_industrial_30_1_300.json"}) {
    const auto text = fileText(suiteDir / name);
    const auto meta = datasetConfigOf(text);
    const auto map = mapForScale(base, meta ? meta->scale : GeoScale::Lab);
    const auto full = parseTaskSet(text);
    for (int uavs : {1, 3}) {
      // One UAV cannot cover 30 tasks; its run uses the first ten.
      std::vector<Task> head(full.tasks().begin(), full.tasks().begin() + (uavs == 1 ? 10 : full.tasks().size()));
      const TaskSet ts(head);
      const auto fleet = makeFleet(uavs, map);
      std::optional<OptimizeResult> r;
      try {
        SwarmConfig cfg;
        cfg.maxGenerations = 5;
        r = optimize(ts, fleet, map, energy, cfg);
      } catch (const NoFeasibleFound&) {
        continue;
      }
      auto check = [&](const Schedule& s) { return validateSchedule(s, ts, fleet, map, energy); };
      if (!check(r->schedule).ok) {
        report("AC7", false, std::string("optimize output invalid on ") + name);
        return;
      }
      if (uavs == 1) {
        Seconds d = kUnreachable;
        for (const auto& a : r->schedule.uavs[0].actions)
          if (a.taskId) d = std::min(d, ts.byId(*a.taskId).dueDate - a.span.end + 1);
        auto s = r->schedule;
        for (auto& a : s.uavs[0].actions) a.span = {a.span.start + d, a.span.end + d};
        s.uavs[0].actions.insert(s.uavs[0].actions.begin(),
                                 act(ActionKind::WaitOnGround, 0, d, fleet[0].initialPosition, fleet[0].initialPosition));
        record("C2", check(s));
      }
      const auto trace = batteryTrace(r->schedule, fleet, map, energy);
      for (std::size_t k = 0; k < r->schedule.uavs.size(); ++k) {
        const auto& u = r->schedule.uavs[k];
        if (u.actions.empty()) continue;
        const auto& last = u.actions.back();
        const auto* tr = &trace.uavs.front();
        for (const auto& t : trace.uavs)
          if (t.uavId == u.uavId) tr = &t;
        const Level level = tr->points.back().level;
        const Level reserve(map.reserve(map.index(last.to)));
        const auto over = boost::rational_cast<double>(level - reserve);
        const auto hover = static_cast<Seconds>(std::floor(over)) + 1;
        auto s = r->schedule;
        s.uavs[k].actions.push_back(act(ActionKind::Hover, last.span.end, last.span.end + hover, last.to, last.to));
        record("C7", check(s));
      }
    }
  }

  bool pass = true;
  std::string detail;
  for (const char* id : {"C2", "C4", "C7", "C9"}) {
    const auto [exact, tried] = tally[id];
    pass = pass && tried > 0 && exact == tried;
    detail += std::string(detail.empty() ? "" : ", ") + id + " " + std::to_string(exact) + "/" + std::to_string(tried);
  }
  report("AC7", pass, "mutations tripping exactly their check: " + detail);
}

void determinism(const fs::path& a, const fs::path& b) {
  std::string differing;
  for (const char* f : {"attempts.csv", "summary.csv", "battery_counts.csv", "battery_reserve.csv"}) {
    if (fileText(a / f) != fileText(b / f) || fileText(a / f).empty()) differing += std::string(" ") + f;
  }
  for (const auto& e : fs::directory_iterator(a / "plots")) {
    const auto name = e.path().filename();
    if (name == "comp_time.csv") continue;  // wall-clock
    if (fileText(e.path()) != fileText(b / "plots" / name)) differing += " plots/" + name.string();
  }
  report("AC8", differing.empty(),
         differing.empty() ? "two benches with seed " + std::to_string(kBenchSeed) + " gave byte-identical CSVs"
                           : "differing:" + differing);
}

void limitations() {
  const std::string text(oracleLimitations());
  const bool ok = text.find("CPLEX") != std::string::npos && text.find("not reproduced") != std::string::npos;
  report("AC9", ok, ok ? "oracle limitations state that CPLEX runtimes are not reproduced" : "statement missing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance run"};
  fs::path work = "acceptance_work";
  bool skipBench = false;
  app.add_option("--work", work, "scratch directory");
  app.add_flag("--skip-bench", skipBench, "skip the benches (criteria 2, 3, 4 and 8 then fail)");
  CLI11_PARSE(app, argc, argv);

  try {
    fs::remove_all(work);
    fs::create_directories(work);
    const auto base = fixtures::labMap();
    const auto suiteDir = work / "suite";
    generateSuite(base, kBenchSeed, suiteDir);

    ruleGoldens();

    if (!skipBench) {
      const auto datasets = loadDatasetDir(suiteDir);
      const auto first = bench(datasets, base, work / "bench_a");
      std::cout << "  bench: " << datasets.size() << " datasets x " << kBenchReps << " reps in " << fmt(first.seconds, 1)
                << " s" << std::endl;
      feasibilitySuite(first.results);
      batteryPreservation(first.results);
      slackTrend(first.results);
      bench(datasets, base, work / "bench_b");
      determinism(work / "bench_a", work / "bench_b");
    } else {
      for (const char* id : {"AC2", "AC3", "AC4", "AC8"}) report(id, false, "skipped");
    }

    oracleDominance(base);
    largeRun(suiteDir, base);
    mutations(base, suiteDir);
    limitations();
  } catch (const std::exception& e) {
    std::cerr << "acceptance aborted: " << e.what() << '\n';
    return 2;
  }

  std::sort(verdicts.begin(), verdicts.end(), [](const Verdict& x, const Verdict& y) { return x.id < y.id; });
  std::cout << "\nsummary\n";
  bool all = true;
  for (const auto& v : verdicts) {
    std::cout << v.id << ' ' << (v.pass ? "PASS" : "FAIL") << '\n';
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
