#pragma once

// Benchmark harness: timing protocol, size and pattern-count sweeps,
// serial/parallel crossover detection, and the CSV report formats.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "acmatch/automaton.hpp"
#include "acmatch/engines.hpp"

namespace acmatch {

enum class Engine { kSerialAc, kParallelFlac };

/// "serial" / "parallel".
std::string_view engine_name(Engine engine) noexcept;
std::optional<Engine> parse_engine(std::string_view name) noexcept;

/// What is about to be timed. Passed to the clock before each sample so fake
/// clocks can model durations.
struct MeasureContext {
  Engine engine = Engine::kSerialAc;
  std::size_t text_size = 0;
  std::size_t pattern_count = 0;
  std::size_t workers = 1;
};

/// Monotonic nanosecond clock. The harness reads it exactly twice per timed
/// repetition (start, stop) and never during the warm-up run.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ns() = 0;
  virtual void prepare(const MeasureContext&) {}
  virtual std::string_view name() const noexcept = 0;
};

class SteadyClock final : public Clock {
 public:
  std::int64_t now_ns() override;
  std::string_view name() const noexcept override { return "steady_clock"; }
};

/// Replays a fixed list of interval durations, cycling when exhausted.
class ScriptedClock final : public Clock {
 public:
  explicit ScriptedClock(std::vector<std::int64_t> durations);
  std::int64_t now_ns() override;
  std::string_view name() const noexcept override { return "scripted"; }
  std::size_t reads() const noexcept { return reads_; }

 private:
  std::vector<std::int64_t> durations_;
  std::size_t next_ = 0;
  std::size_t reads_ = 0;
  std::int64_t now_ = 0;
};

/// duration = fixed_ns + per_byte_ns * n + per_byte_per_pattern_ns * n * p,
/// for text size n and pattern count p.
struct LinearCost {
  double fixed_ns = 0.0;
  double per_byte_ns = 0.0;
  double per_byte_per_pattern_ns = 0.0;

  double at(std::size_t text_size, std::size_t pattern_count) const noexcept;
  friend bool operator==(const LinearCost&, const LinearCost&) = default;
};

/// Deterministic clock whose intervals follow a per-engine cost model.
class ModelClock final : public Clock {
 public:
  ModelClock(LinearCost serial, LinearCost parallel);

  /// Reads {"serial": {...}, "parallel": {...}} with keys fixed_ns,
  /// per_byte_ns and per_byte_per_pattern_ns (each optional, default 0).
  static ModelClock from_json(std::string_view json);
  static ModelClock load(const std::filesystem::path& path);

  std::int64_t now_ns() override;
  void prepare(const MeasureContext& context) override;
  std::string_view name() const noexcept override { return "model"; }

  const LinearCost& serial() const noexcept { return serial_; }
  const LinearCost& parallel() const noexcept { return parallel_; }

 private:
  LinearCost serial_;
  LinearCost parallel_;
  std::int64_t interval_ = 0;
  std::int64_t now_ = 0;
  bool started_ = false;
};

/// Mean of the middle two for even counts. Throws ContractViolation on empty input.
double median_ns(std::span<const std::int64_t> times);

struct TimingSample {
  Engine engine = Engine::kSerialAc;
  std::size_t text_size = 0;
  std::size_t pattern_count = 0;
  std::size_t workers = 1;
  std::size_t repetitions = 0;
  std::vector<std::int64_t> times;
  double median = 0.0;
};

using MatchTarget = std::variant<std::reference_wrapper<const AcAutomaton>,
                                 std::reference_wrapper<const FailurelessTrie>>;

struct MeasureOptions {
  std::size_t repetitions = 11;
  // Required for the parallel engine.
  WorkerPool* pool = nullptr;
  MatchSemantics parallel_semantics = MatchSemantics::kLongestPerStart;
};

/// One untimed warm-up run, then `repetitions` timed runs. Only the matching
/// call sits inside the timed region. Throws ContractViolation when the
/// target does not fit the engine, repetitions == 0, or the parallel engine
/// has no pool.
TimingSample measure(Engine engine, const MatchTarget& target, std::string_view text,
                     const MeasureOptions& options, Clock& clock);

struct SweepParams {
  std::size_t base = 1310;
  std::size_t steps = 41;
  std::size_t pattern_count = 5;
  std::size_t workers = 1;
  std::size_t repetitions = 11;
  std::uint64_t seed = 1;
  std::size_t window = 3;
  MatchSemantics parallel_semantics = MatchSemantics::kLongestPerStart;

  /// 16375 .. 671375 bytes.
  static SweepParams coarse();
  /// 1310 .. 53710 bytes.
  static SweepParams fine();
};

struct SweepPoint {
  std::size_t size = 0;
  double serial_ns = 0.0;
  double parallel_ns = 0.0;
  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepSeries {
  std::size_t pattern_count = 0;
  std::size_t workers = 1;
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  std::vector<SweepPoint> points;

  /// Throws ContractViolation unless there are >= 2 points with strictly
  /// increasing sizes.
  void validate() const;

  friend bool operator==(const SweepSeries&, const SweepSeries&) = default;
};

/// Measures both engines at sizes k * base, k = 1..steps.
SweepSeries sweep_sizes(const SweepParams& params, Clock& clock);

struct CrossoverReport {
  std::optional<double> crossover_size;
  // Grid sizes bracketing the crossing; size_below is empty when the
  // crossing is at the first grid point.
  std::optional<std::size_t> size_below;
  std::optional<std::size_t> size_at;
  std::size_t window = 3;
  SweepSeries series;
};

/// Smallest grid index i where the parallel median beats the serial one at i
/// and at the next window-1 points (clipped at the series end). The crossing
/// is the linear root of serial - parallel between points i-1 and i, or the
/// first size when i == 0.
CrossoverReport find_crossover(const SweepSeries& series, std::size_t window = 3);

struct PatternCountReport {
  std::size_t pattern_count = 0;
  CrossoverReport report;
};

/// One sweep_sizes + find_crossover per count; `params.pattern_count` is
/// overridden by each entry.
std::vector<PatternCountReport> sweep_pattern_counts(std::span<const std::size_t> counts,
                                                     const SweepParams& params, Clock& clock);

// Sweep CSV: size_bytes,pattern_count,workers,engine,median_ns,reps,seed
inline constexpr std::string_view kSweepCsvHeader =
    "size_bytes,pattern_count,workers,engine,median_ns,reps,seed";
// Crossover CSV: pattern_count,crossover_bytes,confirmed_window,grid_base,grid_steps
inline constexpr std::string_view kCrossoverCsvHeader =
    "pattern_count,crossover_bytes,confirmed_window,grid_base,grid_steps";

struct CrossoverRow {
  std::size_t pattern_count = 0;
  std::optional<double> crossover_bytes;
  std::size_t window = 0;
  std::size_t grid_base = 0;
  std::size_t grid_steps = 0;
  friend bool operator==(const CrossoverRow&, const CrossoverRow&) = default;
};

CrossoverRow crossover_row(const CrossoverReport& report);

void write_sweep_csv(std::ostream& out, std::span<const SweepSeries> series);
void write_crossover_csv(std::ostream& out, std::span<const CrossoverRow> rows);

/// File variants; throw IoError when the destination cannot be written.
void emit_sweep_csv(const std::filesystem::path& path, std::span<const SweepSeries> series);
void emit_crossover_csv(const std::filesystem::path& path, std::span<const CrossoverRow> rows);

/// Parsers for the two formats; throw FormatError on schema violations.
std::vector<SweepSeries> parse_sweep_csv(std::string_view csv);
std::vector<CrossoverRow> parse_crossover_csv(std::string_view csv);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace acmatch
