#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mapex/benchmark.hpp"
#include "mapex/grid_io.hpp"
#include "mapex/mission.hpp"
#include "mapex/worldgen.hpp"

namespace fs = std::filesystem;
using namespace mapex;

namespace {

struct CommonOptions {
  double delta_free = ThresholdConfig::defaults().delta_free;
  double delta_obstacle = ThresholdConfig::defaults().delta_obstacle;
  int beams = SensorRig{}.beam_count;
  double beam_range = SensorRig{}.range;
  double coverage_goal = 0.98;
  std::uint64_t seed = 0;
  std::int64_t step_cap = 0;
  bool no_failsafe = false;
  double f1_floor = 0.8;

  ThresholdConfig thresholds() const { return {delta_free, delta_obstacle}; }
  SensorRig rig() const { return {beams, beam_range, 0.0}; }
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--delta-free", o.delta_free, "Confidence required to call a cell free")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--delta-obstacle", o.delta_obstacle, "Confidence required to call a cell an obstacle")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--beams", o.beams, "Number of range beams")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--beam-range", o.beam_range, "Beam range in cells")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--coverage-goal", o.coverage_goal, "Known fraction that ends a mission")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--step-cap", o.step_cap, "Maximum moves, 0 for 10 x height x width")->capture_default_str();
  cmd->add_flag("--no-failsafe", o.no_failsafe, "Disable planning on observations when the prediction seals the agent in");
  cmd->add_option("--f1-floor", o.f1_floor, "Minimum final F1 for a successful mission")->capture_default_str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

Dataset load_dataset(const fs::path& dir, const std::string& name) {
  if (!fs::is_directory(dir)) throw PreconditionError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".grid") files.push_back(entry.path());
  }
  std::ranges::sort(files);
  if (files.empty()) throw PreconditionError("no .grid files in " + dir.string());
  Dataset d{name.empty() ? dir.filename().string() : name, {}, {}};
  for (const fs::path& f : files) {
    d.map_ids.push_back(f.stem().string());
    d.maps.push_back(read_grid_file(f));
  }
  return d;
}

std::vector<PlannerKind> parse_planners(const std::vector<std::string>& names) {
  std::vector<PlannerKind> out;
  for (const std::string& n : names) out.push_back(parse_planner_kind(n));
  return out;
}

Coord parse_coord(const std::string& text) {
  Coord c;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> c.row >> comma >> c.col) || comma != ',' || !in.eof()) {
    throw ConfigError("expected ROW,COL but got '" + text + "'");
  }
  return c;
}

int cmd_gen(const GeneratorConfig& base, int count, const fs::path& out) {
  fs::create_directories(out);
  const auto maps = generate_dataset(base, count);
  for (int i = 0; i < count; ++i) {
    GeneratorConfig cfg = base;
    cfg.seed = base.seed + static_cast<std::uint64_t>(i);
    std::ostringstream stem;
    stem << "map_" << std::setw(5) << std::setfill('0') << cfg.seed;
    write_grid_file(out / (stem.str() + ".grid"), maps[static_cast<std::size_t>(i)]);
    Metadata meta = to_metadata(cfg);
    meta["fraction_of_walls"] = std::to_string(fraction_of_walls(maps[static_cast<std::size_t>(i)]));
    write_metadata_file(out / (stem.str() + ".meta"), meta);
  }
  std::cout << "wrote " << count << " maps to " << out.string() << '\n';
  return 0;
}

int cmd_run(const CommonOptions& o, const fs::path& map_path, const std::string& planner,
            const std::string& predictor, const std::string& start, const fs::path& out) {
  MissionConfig cfg;
  cfg.truth = read_grid_file(map_path);
  cfg.map_id = map_path.stem().string();
  cfg.planner = parse_planner_kind(planner);
  cfg.predictor = parse_predictor_choice(predictor).make(cfg.truth);
  cfg.thresholds = o.thresholds();
  cfg.coverage_goal = o.coverage_goal;
  cfg.rig = o.rig();
  cfg.seed = o.seed;
  cfg.step_cap = o.step_cap;
  cfg.failsafe = !o.no_failsafe;
  cfg.f1_floor = o.f1_floor;
  if (!start.empty()) cfg.start = parse_coord(start);

  const MissionRecord record = run_mission(cfg);
  const std::string text = format_record(record);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
    std::cout << format_summary_line(record) << '\n';
  }
  return 0;
}

int cmd_bench(const CommonOptions& o, const std::vector<std::string>& map_dirs,
              const std::vector<std::string>& planners, const std::vector<std::string>& predictors,
              int random_runs, int threads, const fs::path& out) {
  BenchmarkSuite suite;
  for (const std::string& dir : map_dirs) suite.datasets.push_back(load_dataset(dir, ""));
  suite.planners = parse_planners(planners);
  for (const std::string& p : predictors) suite.predictors.push_back(parse_predictor_choice(p));
  suite.thresholds = o.thresholds();
  suite.coverage_goal = o.coverage_goal;
  suite.rig = o.rig();
  suite.seed = o.seed;
  suite.random_runs = random_runs;
  suite.failsafe = !o.no_failsafe;
  suite.f1_floor = o.f1_floor;
  suite.step_cap = o.step_cap;
  suite.threads = threads;

  const BenchmarkResult result = run_benchmark(suite);
  fs::create_directories(out);
  write_file(out / "runs.csv", runs_csv(result.runs));
  write_file(out / "baseline_runs.csv", runs_csv(result.baseline_runs));
  write_file(out / "summary.csv", summary_csv(result.summary));
  write_file(out / "reductions.csv", reductions_csv(result.reductions));
  std::cout << summary_csv(result.summary);
  return 0;
}

int cmd_eval(const CommonOptions& o, const fs::path& maps, const std::string& predictor,
             const std::vector<int>& counts, int threads, const fs::path& out) {
  const Dataset heldout = load_dataset(maps, "");
  const auto points = evaluate_predictor_curve(heldout, parse_predictor_choice(predictor), o.thresholds(),
                                               o.rig(), counts, o.seed, threads);
  const std::string csv = f1_curve_csv(points);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupancy-grid exploration simulator with map prediction"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);

  GeneratorConfig gen_cfg;
  int gen_count = 1;
  std::string gen_out = "maps";
  auto* gen = app.add_subcommand("gen", "Generate floorplans as .grid files with .meta sidecars");
  gen->add_option("--seed", gen_cfg.seed, "Seed of the first map")->capture_default_str();
  gen->add_option("--count", gen_count, "Number of maps")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();
  gen->add_option("--height", gen_cfg.height)->capture_default_str();
  gen->add_option("--width", gen_cfg.width)->capture_default_str();
  gen->add_option("--min-room-side", gen_cfg.min_room_side)->capture_default_str();
  gen->add_option("--door-width", gen_cfg.door_width)->capture_default_str();
  gen->add_option("--min-depth", gen_cfg.min_split_depth)->capture_default_str();
  gen->add_option("--max-depth", gen_cfg.max_split_depth)->capture_default_str();

  CommonOptions run_opts;
  std::string run_map, run_planner = "nearest", run_predictor = "null", run_start, run_out;
  auto* run = app.add_subcommand("run", "Run one mission and print its record");
  run->add_option("--map", run_map, "Ground-truth .grid file")->required()->check(CLI::ExistingFile);
  run->add_option("--planner", run_planner, "random, nearest or cost-utility")->capture_default_str();
  run->add_option("--predictor", run_predictor, "null, oracle or learned:PATH")->capture_default_str();
  run->add_option("--start", run_start, "Start cell as ROW,COL");
  run->add_option("--out", run_out, "Write the record here instead of stdout");
  add_common(run, run_opts);

  CommonOptions bench_opts;
  std::vector<std::string> bench_maps, bench_planners{"random", "nearest", "cost-utility"},
      bench_predictors{"null", "oracle"};
  int bench_random_runs = 10, bench_threads = 0;
  std::string bench_out = "bench";
  auto* bench = app.add_subcommand("bench", "Run a planner x predictor suite and write CSV tables");
  bench->add_option("--maps", bench_maps, "Directories of .grid files, one dataset each")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench->add_option("--planner", bench_planners, "Planners to run")->delimiter(',')->capture_default_str();
  bench->add_option("--predictor", bench_predictors, "Predictors to run")->delimiter(',')->capture_default_str();
  bench->add_option("--random-runs", bench_random_runs, "Seeds per map for random exploration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--threads", bench_threads, "Worker threads, 0 for all cores")->capture_default_str();
  bench->add_option("--out", bench_out, "Output directory")->capture_default_str();
  add_common(bench, bench_opts);

  CommonOptions eval_opts;
  std::string eval_maps, eval_predictor = "null", eval_out;
  std::vector<int> eval_counts{0, 1, 2, 4, 8, 16, 32};
  int eval_threads = 0;
  auto* eval = app.add_subcommand("eval-predictor", "F1 of observations and predictions versus observation count");
  eval->add_option("--maps", eval_maps, "Directory of held-out .grid files")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--predictor", eval_predictor, "null, oracle or learned:PATH")->capture_default_str();
  eval->add_option("--counts", eval_counts, "Observation counts to sample")->delimiter(',')->capture_default_str();
  eval->add_option("--threads", eval_threads, "Worker threads, 0 for all cores")->capture_default_str();
  eval->add_option("--out", eval_out, "CSV output file, stdout when omitted");
  add_common(eval, eval_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(gen_cfg, gen_count, gen_out);
    if (*run) return cmd_run(run_opts, run_map, run_planner, run_predictor, run_start, run_out);
    if (*bench) {
      return cmd_bench(bench_opts, bench_maps, bench_planners, bench_predictors, bench_random_runs,
                       bench_threads, bench_out);
    }
    if (*eval) return cmd_eval(eval_opts, eval_maps, eval_predictor, eval_counts, eval_threads, eval_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
