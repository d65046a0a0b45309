#include "acmatch/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "acmatch/error.hpp"
#include "acmatch/workload.hpp"

namespace acmatch {

std::string_view engine_name(Engine engine) noexcept {
  return engine == Engine::kSerialAc ? "serial" : "parallel";
}

std::optional<Engine> parse_engine(std::string_view name) noexcept {
  if (name == "serial") return Engine::kSerialAc;
  if (name == "parallel") return Engine::kParallelFlac;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Clocks

std::int64_t SteadyClock::now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

ScriptedClock::ScriptedClock(std::vector<std::int64_t> durations)
    : durations_(std::move(durations)) {
  if (durations_.empty()) {
    throw ContractViolation("scripted clock needs at least one duration");
  }
}

std::int64_t ScriptedClock::now_ns() {
  // Even reads start an interval, odd reads end it.
  if (reads_++ % 2 == 1) {
    now_ += durations_[next_];
    next_ = (next_ + 1) % durations_.size();
  }
  return now_;
}

double LinearCost::at(std::size_t text_size, std::size_t pattern_count) const noexcept {
  const auto n = static_cast<double>(text_size);
  return fixed_ns + per_byte_ns * n + per_byte_per_pattern_ns * n * static_cast<double>(pattern_count);
}

ModelClock::ModelClock(LinearCost serial, LinearCost parallel)
    : serial_(serial), parallel_(parallel) {}

namespace {

LinearCost read_cost(const nlohmann::json& j, const char* engine) {
  if (!j.is_object()) {
    throw FormatError(std::string("fake clock: \"") + engine + "\" must be an object");
  }
  LinearCost cost;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) {
      throw FormatError("fake clock: " + key + " must be a number");
    }
    if (key == "fixed_ns") {
      cost.fixed_ns = value.get<double>();
    } else if (key == "per_byte_ns") {
      cost.per_byte_ns = value.get<double>();
    } else if (key == "per_byte_per_pattern_ns") {
      cost.per_byte_per_pattern_ns = value.get<double>();
    } else {
      throw FormatError("fake clock: unknown key " + key);
    }
  }
  return cost;
}

}  // namespace

ModelClock ModelClock::from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("fake clock: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("serial") || !doc.contains("parallel") || doc.size() != 2) {
    throw FormatError("fake clock: expected exactly the keys \"serial\" and \"parallel\"");
  }
  return ModelClock(read_cost(doc["serial"], "serial"), read_cost(doc["parallel"], "parallel"));
}

ModelClock ModelClock::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open fake clock file " + path.string());
  std::string contents{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return from_json(contents);
}

std::int64_t ModelClock::now_ns() {
  if (started_) now_ += interval_;
  started_ = !started_;
  return now_;
}

void ModelClock::prepare(const MeasureContext& context) {
  const LinearCost& cost = context.engine == Engine::kSerialAc ? serial_ : parallel_;
  interval_ = std::llround(cost.at(context.text_size, context.pattern_count));
  started_ = false;
}

// ---------------------------------------------------------------------------
// Measurement

double median_ns(std::span<const std::int64_t> times) {
  if (times.empty()) throw ContractViolation("median of an empty sample");
  std::vector<std::int64_t> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return static_cast<double>(sorted[mid]);
  return (static_cast<double>(sorted[mid - 1]) + static_cast<double>(sorted[mid])) / 2.0;
}

TimingSample measure(Engine engine, const MatchTarget& target, std::string_view text,
                     const MeasureOptions& options, Clock& clock) {
  if (options.repetitions == 0) {
    throw ContractViolation("measure: repetitions must be at least 1");
  }
  const auto* automaton = std::get_if<std::reference_wrapper<const AcAutomaton>>(&target);
  const auto* trie = std::get_if<std::reference_wrapper<const FailurelessTrie>>(&target);
  if (engine == Engine::kSerialAc && automaton == nullptr) {
    throw ContractViolation("measure: the serial engine needs an Aho-Corasick automaton");
  }
  if (engine == Engine::kParallelFlac && trie == nullptr) {
    throw ContractViolation("measure: the parallel engine needs a failure-less trie");
  }
  if (engine == Engine::kParallelFlac && options.pool == nullptr) {
    throw ContractViolation("measure: the parallel engine needs a worker pool");
  }

  auto run = [&] {
    return engine == Engine::kSerialAc
               ? match_serial(automaton->get(), text)
               : match_parallel(trie->get(), text, *options.pool, options.parallel_semantics);
  };

  TimingSample sample;
  sample.engine = engine;
  sample.text_size = text.size();
  sample.pattern_count = automaton ? automaton->get().pattern_count() : trie->get().pattern_count();
  sample.workers = engine == Engine::kSerialAc ? 1 : options.pool->size();
  sample.repetitions = options.repetitions;
  sample.times.reserve(options.repetitions);

  // Warm-up: spins up the pool and touches text and tables. Not timed.
  volatile std::size_t sink = run().size();

  clock.prepare({engine, sample.text_size, sample.pattern_count, sample.workers});
  for (std::size_t r = 0; r < options.repetitions; ++r) {
    const std::int64_t begin = clock.now_ns();
    auto events = run();
    const std::int64_t end = clock.now_ns();
    sink = sink + events.size();
    sample.times.push_back(end - begin);
  }
  (void)sink;
  sample.median = median_ns(sample.times);
  return sample;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepParams SweepParams::coarse() {
  SweepParams p;
  p.base = 16375;
  p.steps = 41;
  return p;
}

SweepParams SweepParams::fine() {
  SweepParams p;
  p.base = 1310;
  p.steps = 41;
  return p;
}

void SweepSeries::validate() const {
  if (points.size() < 2) {
    throw ContractViolation("sweep series needs at least 2 points");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].size <= points[i - 1].size) {
      throw ContractViolation("sweep series sizes must be strictly increasing");
    }
  }
}

SweepSeries sweep_sizes(const SweepParams& params, Clock& clock) {
  if (params.steps < 2) throw ContractViolation("sweep needs at least 2 steps");
  if (params.base == 0) throw ContractViolation("sweep base size must be positive");

  const PatternSet patterns = gen_patterns(params.pattern_count, params.seed);
  const AcAutomaton automaton = build_automaton(patterns);
  const FailurelessTrie& trie = automaton.trie();
  WorkerPool pool(params.workers);

  MeasureOptions options;
  options.repetitions = params.repetitions;
  options.pool = &pool;
  options.parallel_semantics = params.parallel_semantics;

  SweepSeries series;
  series.pattern_count = params.pattern_count;
  series.workers = params.workers;
  series.repetitions = params.repetitions;
  series.seed = params.seed;
  series.points.reserve(params.steps);
  for (std::size_t k = 1; k <= params.steps; ++k) {
    const std::string text = gen_text(k * params.base);
    const TimingSample serial = measure(Engine::kSerialAc, std::cref(automaton), text, options, clock);
    const TimingSample parallel = measure(Engine::kParallelFlac, std::cref(trie), text, options, clock);
    series.points.push_back({text.size(), serial.median, parallel.median});
  }
  return series;
}

CrossoverReport find_crossover(const SweepSeries& series, std::size_t window) {
  series.validate();
  if (window == 0) throw ContractViolation("confirmation window must be at least 1");

  CrossoverReport report;
  report.window = window;
  report.series = series;

  const auto& pts = series.points;
  auto parallel_wins = [&](std::size_t i) { return pts[i].parallel_ns < pts[i].serial_ns; };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t last = std::min(pts.size(), i + window);
    bool confirmed = true;
    for (std::size_t j = i; j < last && confirmed; ++j) confirmed = parallel_wins(j);
    if (!confirmed) continue;

    report.size_at = pts[i].size;
    if (i == 0) {
      report.crossover_size = static_cast<double>(pts[0].size);
      return report;
    }
    // d = serial - parallel: d(i-1) <= 0 < d(i), since i is the first confirmed index.
    const double d0 = pts[i - 1].serial_ns - pts[i - 1].parallel_ns;
    const double d1 = pts[i].serial_ns - pts[i].parallel_ns;
    const auto x0 = static_cast<double>(pts[i - 1].size);
    const auto x1 = static_cast<double>(pts[i].size);
    report.size_below = pts[i - 1].size;
    report.crossover_size = x0 + (x1 - x0) * (-d0) / (d1 - d0);
    return report;
  }
  return report;
}

std::vector<PatternCountReport> sweep_pattern_counts(std::span<const std::size_t> counts,
                                                     const SweepParams& params, Clock& clock) {
  if (counts.empty()) throw ContractViolation("sweep_pattern_counts: no pattern counts given");
  std::vector<PatternCountReport> reports;
  reports.reserve(counts.size());
  for (std::size_t count : counts) {
    SweepParams p = params;
    p.pattern_count = count;
    reports.push_back({count, find_crossover(sweep_sizes(p, clock), p.window)});
  }
  return reports;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

CrossoverRow crossover_row(const CrossoverReport& report) {
  CrossoverRow row;
  row.pattern_count = report.series.pattern_count;
  row.crossover_bytes = report.crossover_size;
  row.window = report.window;
  row.grid_base = report.series.points.empty() ? 0 : report.series.points.front().size;
  row.grid_steps = report.series.points.size();
  return row;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepSeries> series) {
  out << kSweepCsvHeader << '\n';
  for (const SweepSeries& s : series) {
    for (const SweepPoint& p : s.points) {
      for (Engine e : {Engine::kSerialAc, Engine::kParallelFlac}) {
        out << p.size << ',' << s.pattern_count << ',' << s.workers << ',' << engine_name(e) << ','
            << format_double(e == Engine::kSerialAc ? p.serial_ns : p.parallel_ns) << ','
            << s.repetitions << ',' << s.seed << '\n';
      }
    }
  }
}

void write_crossover_csv(std::ostream& out, std::span<const CrossoverRow> rows) {
  out << kCrossoverCsvHeader << '\n';
  for (const CrossoverRow& r : rows) {
    out << r.pattern_count << ',';
    if (r.crossover_bytes) out << format_double(*r.crossover_bytes);
    out << ',' << r.window << ',' << r.grid_base << ',' << r.grid_steps << '\n';
  }
}

namespace {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& write) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = line.find(sep, pos);
    fields.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) return fields;
    pos = next + 1;
  }
}

std::vector<std::string_view> csv_lines(std::string_view csv, std::string_view header) {
  if (csv.empty() || csv.back() != '\n') throw FormatError("CSV must end with LF");
  csv.remove_suffix(1);
  auto lines = split(csv, '\n');
  if (lines.front() != header) {
    throw FormatError("unexpected CSV header: " + std::string(lines.front()));
  }
  lines.erase(lines.begin());
  return lines;
}

template <class T>
T parse_number(std::string_view field, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw FormatError(std::string("bad ") + what + " field: '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

void emit_sweep_csv(const std::filesystem::path& path, std::span<const SweepSeries> series) {
  write_file(path, [&](std::ostream& out) { write_sweep_csv(out, series); });
}

void emit_crossover_csv(const std::filesystem::path& path, std::span<const CrossoverRow> rows) {
  write_file(path, [&](std::ostream& out) { write_crossover_csv(out, rows); });
}

std::vector<SweepSeries> parse_sweep_csv(std::string_view csv) {
  const auto lines = csv_lines(csv, kSweepCsvHeader);
  if (lines.size() % 2 != 0) throw FormatError("sweep CSV rows must come in serial/parallel pairs");

  std::vector<SweepSeries> out;
  for (std::size_t i = 0; i < lines.size(); i += 2) {
    const auto a = split(lines[i], ',');
    const auto b = split(lines[i + 1], ',');
    if (a.size() != 7 || b.size() != 7) throw FormatError("sweep CSV rows need 7 fields");
    if (a[3] != "serial" || b[3] != "parallel") {
      throw FormatError("sweep CSV: expected a serial row followed by a parallel row");
    }
    for (std::size_t f : {0u, 1u, 2u, 5u, 6u}) {
      if (a[f] != b[f]) throw FormatError("sweep CSV: serial/parallel rows disagree");
    }
    const auto size = parse_number<std::size_t>(a[0], "size_bytes");
    const auto patterns = parse_number<std::size_t>(a[1], "pattern_count");
    const auto workers = parse_number<std::size_t>(a[2], "workers");
    const auto reps = parse_number<std::size_t>(a[5], "reps");
    const auto seed = parse_number<std::uint64_t>(a[6], "seed");
    const SweepPoint point{size, parse_number<double>(a[4], "median_ns"),
                           parse_number<double>(b[4], "median_ns")};

    const bool continues = !out.empty() && out.back().pattern_count == patterns &&
                           out.back().workers == workers && out.back().repetitions == reps &&
                           out.back().seed == seed && out.back().points.back().size < size;
    if (!continues) out.push_back({patterns, workers, reps, seed, {}});
    out.back().points.push_back(point);
  }
  return out;
}

std::vector<CrossoverRow> parse_crossover_csv(std::string_view csv) {
  std::vector<CrossoverRow> rows;
  for (std::string_view line : csv_lines(csv, kCrossoverCsvHeader)) {
    const auto f = split(line, ',');
    if (f.size() != 5) throw FormatError("crossover CSV rows need 5 fields");
    CrossoverRow row;
    row.pattern_count = parse_number<std::size_t>(f[0], "pattern_count");
    if (!f[1].empty()) row.crossover_bytes = parse_number<double>(f[1], "crossover_bytes");
    row.window = parse_number<std::size_t>(f[2], "confirmed_window");
    row.grid_base = parse_number<std::size_t>(f[3], "grid_base");
    row.grid_steps = parse_number<std::size_t>(f[4], "grid_steps");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace acmatch
