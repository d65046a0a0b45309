#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acmatch/automaton.hpp"
#include "acmatch/bench.hpp"
#include "acmatch/byte_scan.hpp"
#include "acmatch/dispatch.hpp"
#include "acmatch/engines.hpp"
#include "acmatch/error.hpp"
#include "acmatch/workload.hpp"

namespace acmatch::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

std::size_t default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

std::string read_file(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open ") + what + " " + path.string());
  std::string contents{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError(std::string("cannot read ") + what + " " + path.string());
  return contents;
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

// Real clock unless a fake-clock model file was given.
std::unique_ptr<Clock> make_clock(const std::string& fake_clock) {
  if (fake_clock.empty()) return std::make_unique<SteadyClock>();
  return std::make_unique<ModelClock>(ModelClock::load(fake_clock));
}

const std::map<std::string, MatchSemantics> kSemantics{
    {"all", MatchSemantics::kAllMatches}, {"longest", MatchSemantics::kLongestPerStart}};

struct GenerateArgs {
  std::size_t size = 0;
  std::size_t patterns = 5;
  std::uint64_t seed = 1;
  std::string out_text;
  std::string out_patterns;
};

struct MatchArgs {
  std::string text;
  std::string patterns;
  std::string engine = "serial";
  std::size_t workers = default_workers();
  std::optional<std::string> semantics;
  std::string calibration;
};

struct BenchArgs {
  std::string mode = "coarse";
  std::size_t reps = 11;
  std::size_t workers = default_workers();
  std::uint64_t seed = 1;
  std::size_t pattern_count = 5;
  std::vector<std::size_t> counts{5, 10};
  std::optional<std::size_t> base;
  std::optional<std::size_t> steps;
  std::size_t window = 3;
  std::string out;
  std::string fake_clock;
};

struct CalibrateArgs {
  std::size_t reps = 11;
  std::size_t workers = default_workers();
  std::uint64_t seed = 1;
  std::size_t pattern_count = 5;
  std::size_t base = 1310;
  std::size_t steps = 41;
  std::size_t window = 3;
  std::string host_label;
  std::string out;
  std::string fake_clock;
};

int cmd_generate(const GenerateArgs& a) {
  write_file(a.out_text, gen_text(a.size));
  write_file(a.out_patterns, gen_patterns(a.patterns, a.seed).serialize());
  return kOk;
}

int cmd_match(const MatchArgs& a, std::ostream& out, std::ostream& err) {
  const PatternSet patterns = PatternSet::load(a.patterns);
  const std::string text = read_file(a.text, "text file");

  // Parallel defaults to longest-per-start; serial and auto report everything.
  MatchSemantics semantics = a.engine == "parallel" ? MatchSemantics::kLongestPerStart
                                                    : MatchSemantics::kAllMatches;
  if (a.semantics) semantics = kSemantics.at(*a.semantics);

  std::vector<MatchEvent> events;
  Engine chosen = Engine::kSerialAc;
  if (a.engine == "auto") {
    const Calibration cal = load_calibration(a.calibration);
    if (cal.pattern_count != patterns.size()) {
      err << "warning: calibration was made with " << cal.pattern_count
          << " patterns; dispatching " << patterns.size() << "\n";
    }
    DispatchResult result = Dispatcher(patterns, cal).match(text, semantics);
    chosen = result.choice.engine;
    events = std::move(result.matches);
  } else if (a.engine == "parallel") {
    chosen = Engine::kParallelFlac;
    events = match_parallel(build_trie(patterns), text, a.workers, semantics);
  } else {
    events = match_serial(build_automaton(patterns), text);
    if (semantics == MatchSemantics::kLongestPerStart) events = keep_longest_per_start(events);
  }

  write_matches(out, events);
  out.flush();
  err << "# matches=" << events.size() << " engine=" << engine_name(chosen) << "\n";
  return kOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& err) {
  SweepParams params = a.mode == "coarse" ? SweepParams::coarse() : SweepParams::fine();
  if (a.base) params.base = *a.base;
  if (a.steps) params.steps = *a.steps;
  params.repetitions = a.reps;
  params.workers = a.workers;
  params.seed = a.seed;
  params.pattern_count = a.pattern_count;
  params.window = a.window;

  auto clock = make_clock(a.fake_clock);
  std::vector<SweepSeries> series;
  std::vector<CrossoverRow> rows;
  if (a.mode == "patterns") {
    for (const auto& r : sweep_pattern_counts(a.counts, params, *clock)) {
      series.push_back(r.report.series);
      rows.push_back(crossover_row(r.report));
    }
  } else {
    series.push_back(sweep_sizes(params, *clock));
    rows.push_back(crossover_row(find_crossover(series.back(), params.window)));
  }

  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  emit_sweep_csv(dir / "sweep.csv", series);
  emit_crossover_csv(dir / "crossover.csv", rows);

  nlohmann::ordered_json meta;
  meta["mode"] = a.mode;
  meta["clock"] = std::string(clock->name());
  meta["timed_region"] = "matching only; automaton construction excluded";
  meta["warmup_runs"] = 1;
  meta["parallel_semantics"] = std::string(semantics_name(params.parallel_semantics));
  meta["pattern_rng"] = std::string(kPatternRngId);
  meta["scan_isa"] = std::string(isa_name(active_isa()));
  write_file(dir / "meta.json", meta.dump(2) + "\n");

  for (const auto& row : rows) {
    err << "# patterns=" << row.pattern_count << " crossover_bytes="
        << (row.crossover_bytes ? format_double(*row.crossover_bytes) : std::string("none")) << "\n";
  }
  return kOk;
}

int cmd_calibrate(const CalibrateArgs& a, std::ostream& err) {
  SweepParams params;
  params.base = a.base;
  params.steps = a.steps;
  params.repetitions = a.reps;
  params.workers = a.workers;
  params.seed = a.seed;
  params.pattern_count = a.pattern_count;
  params.window = a.window;

  auto clock = make_clock(a.fake_clock);
  const Calibration cal =
      calibrate(params, *clock, a.host_label.empty() ? default_host_label() : a.host_label);
  save_calibration(a.out, cal);
  err << "# threshold_bytes="
      << (cal.threshold_bytes ? std::to_string(*cal.threshold_bytes) : std::string("inf")) << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-pattern string matching: serial Aho-Corasick and failure-less parallel engines"};
  app.name("acmatch");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a benchmark text and pattern file");
  generate->add_option("--size", gen.size, "Text size in bytes")->required();
  generate->add_option("--patterns", gen.patterns, "Number of patterns")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Pattern generator seed");
  generate->add_option("--out-text", gen.out_text, "Output text file")->required();
  generate->add_option("--out-patterns", gen.out_patterns, "Output pattern file")->required();

  MatchArgs match;
  auto add_match_inputs = [](CLI::App* cmd, MatchArgs& m) {
    cmd->add_option("--text", m.text, "Text file")->required();
    cmd->add_option("--patterns", m.patterns, "Pattern file, one pattern per line")->required();
    cmd->add_option("--workers", m.workers, "Worker threads for the parallel engine")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--semantics", m.semantics, "all | longest")
        ->check(CLI::IsMember({"all", "longest"}));
  };
  auto* match_cmd = app.add_subcommand("match", "Match patterns against a text file");
  add_match_inputs(match_cmd, match);
  match_cmd->add_option("--engine", match.engine, "serial | parallel | auto")
      ->check(CLI::IsMember({"serial", "parallel", "auto"}));
  match_cmd->add_option("--calibration", match.calibration, "Calibration file (needed by auto)");

  MatchArgs run_args;
  run_args.engine = "auto";
  auto* run_cmd = app.add_subcommand("run", "Match with the engine picked by a calibration file");
  add_match_inputs(run_cmd, run_args);
  run_cmd->add_option("--calibration", run_args.calibration, "Calibration file")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time both engines over a size sweep");
  bench_cmd->add_option("--mode", bench.mode, "coarse | fine | patterns")
      ->check(CLI::IsMember({"coarse", "fine", "patterns"}));
  bench_cmd->add_option("--reps", bench.reps, "Timed repetitions per sample")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--workers", bench.workers, "Parallel engine workers")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Pattern generator seed");
  bench_cmd->add_option("--pattern-count", bench.pattern_count, "Patterns for coarse/fine sweeps")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--counts", bench.counts, "Pattern counts for --mode patterns")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--base", bench.base, "Override the grid base size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--steps", bench.steps, "Override the grid step count")->check(CLI::Range(2, 1 << 20));
  bench_cmd->add_option("--window", bench.window, "Crossover confirmation window")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out, "Output directory")->required();
  bench_cmd->add_option("--fake-clock", bench.fake_clock)->group("");

  CalibrateArgs cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Find the dispatch threshold and write it as JSON");
  cal_cmd->add_option("--reps", cal.reps, "Timed repetitions per sample")->check(CLI::PositiveNumber);
  cal_cmd->add_option("--workers", cal.workers, "Parallel engine workers")->check(CLI::PositiveNumber);
  cal_cmd->add_option("--seed", cal.seed, "Pattern generator seed");
  cal_cmd->add_option("--pattern-count", cal.pattern_count, "Patterns in the calibration workload")
      ->check(CLI::PositiveNumber);
  cal_cmd->add_option("--base", cal.base, "Grid base size")->check(CLI::PositiveNumber);
  cal_cmd->add_option("--steps", cal.steps, "Grid steps")->check(CLI::Range(2, 1 << 20));
  cal_cmd->add_option("--window", cal.window, "Crossover confirmation window")->check(CLI::PositiveNumber);
  cal_cmd->add_option("--host-label", cal.host_label, "Label stored in the file (default: host name)");
  cal_cmd->add_option("--out", cal.out, "Calibration file to write")->required();
  cal_cmd->add_option("--fake-clock", cal.fake_clock)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "Run with --help for usage.\n";
    return kUsageError;
  }

  if (match_cmd->parsed() && match.engine == "auto" && match.calibration.empty()) {
    err << "error: --engine auto requires --calibration\n";
    return kUsageError;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (match_cmd->parsed()) return cmd_match(match, out, err);
    if (run_cmd->parsed()) return cmd_match(run_args, out, err);
    if (bench_cmd->parsed()) return cmd_bench(bench, err);
    if (cal_cmd->parsed()) return cmd_calibrate(cal, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace acmatch::cli
