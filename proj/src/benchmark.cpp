#include "mapex/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "mapex/nn/network.hpp"
#include "mapex/nn/weights_codec.hpp"

namespace mapex {
namespace {

struct Job {
  std::size_t dataset;
  std::size_t map;
  PlannerKind planner;
  std::size_t predictor;  // index into suite.predictors, or npos for the baseline
  std::uint64_t seed;
};

constexpr std::size_t kBaseline = static_cast<std::size_t>(-1);

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::ranges::sort(v);
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

auto run_key(const RunRow& r) {
  return std::tie(r.dataset, r.map_id, r.planner, r.predictor, r.seed);
}

}  // namespace

PredictorChoice null_predictor_choice() {
  auto shared = std::make_shared<const NullPredictor>();
  return {"null", [shared](const OccupancyGrid&) -> std::shared_ptr<const Predictor> { return shared; }};
}

PredictorChoice oracle_predictor_choice() {
  return {"oracle", [](const OccupancyGrid& truth) -> std::shared_ptr<const Predictor> {
            return std::make_shared<const OraclePredictor>(truth);
          }};
}

PredictorChoice parse_predictor_choice(const std::string& spec) {
  if (spec == "null") return null_predictor_choice();
  if (spec == "oracle") return oracle_predictor_choice();
  constexpr std::string_view prefix = "learned:";
  if (spec.starts_with(prefix)) {
    const std::string path = spec.substr(prefix.size());
    if (path.empty()) throw ConfigError("learned predictor needs a weight file path");
    auto weights = std::make_shared<const nn::PredictorWeights>(nn::read_weights_file(path));
    auto shared = std::make_shared<const nn::LearnedPredictor>(weights);
    return {"learned", [shared](const OccupancyGrid&) -> std::shared_ptr<const Predictor> { return shared; }};
  }
  throw ConfigError("unknown predictor '" + spec + "' (expected null, oracle or learned:PATH)");
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

RunRow to_run_row(const std::string& dataset, const MissionRecord& record) {
  return {dataset,
          record.map_id,
          record.planner,
          record.predictor,
          record.seed,
          record.mapping_time(),
          record.coverage,
          record.f1.f1,
          record.f1.precision,
          record.f1.recall,
          record.success,
          to_string(record.cause),
          record.steps};
}

BenchmarkResult run_benchmark(const BenchmarkSuite& suite) {
  std::size_t map_count = 0;
  for (const Dataset& d : suite.datasets) {
    if (d.maps.size() != d.map_ids.size()) {
      throw PreconditionError("dataset " + d.name + " has mismatched ids and maps");
    }
    map_count += d.maps.size();
  }
  if (map_count == 0) throw PreconditionError("benchmark suite has no maps");
  if (suite.planners.empty() || suite.predictors.empty()) {
    throw PreconditionError("benchmark suite needs at least one planner and one predictor");
  }
  if (suite.random_runs < 1) throw ConfigError("random_runs must be >= 1");

  const PredictorChoice baseline_predictor = null_predictor_choice();
  std::vector<Job> jobs;
  for (std::size_t d = 0; d < suite.datasets.size(); ++d) {
    for (std::size_t m = 0; m < suite.datasets[d].maps.size(); ++m) {
      jobs.push_back({d, m, PlannerKind::NearestFrontier, kBaseline, suite.seed});
      for (PlannerKind planner : suite.planners) {
        const int runs = planner == PlannerKind::Random ? suite.random_runs : 1;
        for (std::size_t q = 0; q < suite.predictors.size(); ++q) {
          for (int k = 0; k < runs; ++k) {
            jobs.push_back({d, m, planner, q, suite.seed + static_cast<std::uint64_t>(k)});
          }
        }
      }
    }
  }

  std::vector<RunRow> rows(jobs.size());
  parallel_for(jobs.size(), suite.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    const Dataset& ds = suite.datasets[job.dataset];
    const PredictorChoice& choice =
        job.predictor == kBaseline ? baseline_predictor : suite.predictors[job.predictor];
    MissionConfig cfg;
    cfg.truth = ds.maps[job.map];
    cfg.map_id = ds.map_ids[job.map];
    cfg.planner = job.planner;
    cfg.predictor = choice.make(cfg.truth);
    cfg.thresholds = suite.thresholds;
    cfg.coverage_goal = suite.coverage_goal;
    cfg.rig = suite.rig;
    cfg.seed = job.seed;
    cfg.step_cap = suite.step_cap;
    cfg.failsafe = suite.failsafe;
    cfg.f1_floor = suite.f1_floor;
    rows[i] = to_run_row(ds.name, run_mission(cfg));
    rows[i].predictor = choice.name;
  });

  BenchmarkResult result;
  std::map<std::pair<std::size_t, std::size_t>, double> baseline_time;
  std::map<std::tuple<std::size_t, std::size_t, PlannerKind, std::size_t>, std::vector<const RunRow*>> cells;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    if (job.predictor == kBaseline) {
      baseline_time[{job.dataset, job.map}] = rows[i].path_length;
      result.baseline_runs.push_back(rows[i]);
    } else {
      cells[{job.dataset, job.map, job.planner, job.predictor}].push_back(&rows[i]);
      result.runs.push_back(rows[i]);
    }
  }

  for (std::size_t d = 0; d < suite.datasets.size(); ++d) {
    const Dataset& ds = suite.datasets[d];
    for (PlannerKind planner : suite.planners) {
      for (std::size_t q = 0; q < suite.predictors.size(); ++q) {
        SummaryRow s{ds.name, to_string(planner), suite.predictors[q].name};
        std::vector<double> times, reductions, f1s;
        std::size_t successes = 0, run_count = 0;
        for (std::size_t m = 0; m < ds.maps.size(); ++m) {
          const auto& runs = cells[{d, m, planner, q}];
          std::vector<double> per_seed;
          for (const RunRow* r : runs) {
            per_seed.push_back(r->path_length);
            f1s.push_back(r->f1);
            successes += r->success ? 1 : 0;
            ++run_count;
          }
          const double t = mean(per_seed);
          const double base = baseline_time[{d, m}];
          const double reduction = base > 0.0 ? 1.0 - t / base : 0.0;
          times.push_back(t);
          reductions.push_back(reduction);
          result.reductions.push_back({ds.name, ds.map_ids[m], s.planner, s.predictor, t, base, reduction});
        }
        s.maps = static_cast<int>(ds.maps.size());
        s.mean_time = mean(times);
        s.median_time = median(times);
        s.mean_reduction = mean(reductions);
        s.median_reduction = median(reductions);
        s.success_rate = run_count > 0 ? static_cast<double>(successes) / static_cast<double>(run_count) : 0.0;
        s.mean_f1 = mean(f1s);
        s.min_f1 = f1s.empty() ? 0.0 : *std::ranges::min_element(f1s);
        result.summary.push_back(std::move(s));
      }
    }
  }

  std::ranges::sort(result.runs, [](const RunRow& a, const RunRow& b) { return run_key(a) < run_key(b); });
  std::ranges::sort(result.baseline_runs,
                    [](const RunRow& a, const RunRow& b) { return run_key(a) < run_key(b); });
  return result;
}

std::string runs_csv(const std::vector<RunRow>& rows) {
  std::ostringstream os;
  os << "dataset,map_id,planner,predictor,seed,path_length,coverage,f1,precision,recall,success,cause\n";
  for (const RunRow& r : rows) {
    os << r.dataset << ',' << r.map_id << ',' << r.planner << ',' << r.predictor << ',' << r.seed
       << ',' << fmt(r.path_length) << ',' << fmt(r.coverage) << ',' << fmt(r.f1) << ','
       << fmt(r.precision) << ',' << fmt(r.recall) << ',' << (r.success ? 1 : 0) << ','
       << r.cause << '\n';
  }
  return os.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "dataset,planner,predictor,maps,mean_time,median_time,mean_reduction,median_reduction,"
        "success_rate,mean_f1,min_f1\n";
  for (const SummaryRow& s : rows) {
    os << s.dataset << ',' << s.planner << ',' << s.predictor << ',' << s.maps << ','
       << fmt(s.mean_time) << ',' << fmt(s.median_time) << ',' << fmt(s.mean_reduction) << ','
       << fmt(s.median_reduction) << ',' << fmt(s.success_rate) << ',' << fmt(s.mean_f1) << ','
       << fmt(s.min_f1) << '\n';
  }
  return os.str();
}

std::string reductions_csv(const std::vector<MapReduction>& rows) {
  std::ostringstream os;
  os << "dataset,map_id,planner,predictor,mapping_time,baseline_time,reduction\n";
  for (const MapReduction& r : rows) {
    os << r.dataset << ',' << r.map_id << ',' << r.planner << ',' << r.predictor << ','
       << fmt(r.mapping_time) << ',' << fmt(r.baseline_time) << ',' << fmt(r.reduction) << '\n';
  }
  return os.str();
}

std::vector<F1CurvePoint> evaluate_predictor_curve(const Dataset& heldout,
                                                   const PredictorChoice& predictor,
                                                   const ThresholdConfig& thresholds,
                                                   const SensorRig& rig,
                                                   const std::vector<int>& observation_counts,
                                                   std::uint64_t seed, int threads) {
  if (heldout.maps.empty()) throw PreconditionError("no held-out maps to evaluate");
  if (observation_counts.empty()) throw PreconditionError("no observation counts requested");
  const int deepest = *std::ranges::max_element(observation_counts);
  if (*std::ranges::min_element(observation_counts) < 0) {
    throw PreconditionError("observation counts must be non-negative");
  }

  std::vector<std::vector<F1CurvePoint>> per_map(heldout.maps.size());
  parallel_for(heldout.maps.size(), threads, [&](std::size_t m) {
    const OccupancyGrid& truth = heldout.maps[m];
    const auto model = predictor.make(truth);
    const auto snapshots = deepest > 0
                               ? random_observation_tree(truth, rig, seed + m, deepest)
                               : std::vector<ObservationMap>{};
    for (int count : observation_counts) {
      const ObservationMap obs = count == 0
                                     ? empty_observation(truth.height(), truth.width())
                                     : snapshots[static_cast<std::size_t>(count - 1)];
      per_map[m].push_back({heldout.map_ids[m], count, f1_score(obs, truth).f1,
                            f1_score(construct_map(*model, obs, thresholds), truth).f1});
    }
  });

  std::vector<F1CurvePoint> out;
  for (auto& points : per_map) out.insert(out.end(), points.begin(), points.end());
  return out;
}

std::string f1_curve_csv(const std::vector<F1CurvePoint>& points) {
  std::ostringstream os;
  os << "map_id,observations,baseline_f1,predicted_f1\n";
  for (const F1CurvePoint& p : points) {
    os << p.map_id << ',' << p.observations << ',' << fmt(p.baseline_f1) << ','
       << fmt(p.predicted_f1) << '\n';
  }
  return os.str();
}

}  // namespace mapex
