#pragma once

// Size-threshold dispatch between the serial and parallel engines.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acmatch/automaton.hpp"
#include "acmatch/bench.hpp"
#include "acmatch/engines.hpp"
#include "acmatch/pattern_set.hpp"

namespace acmatch {

struct CalibrationSweep {
  std::size_t base = 1310;
  std::size_t steps = 41;
  std::size_t repetitions = 11;
  std::size_t window = 3;
  friend bool operator==(const CalibrationSweep&, const CalibrationSweep&) = default;
};

struct Calibration {
  // Empty means no crossover was found: always run serial.
  std::optional<std::uint64_t> threshold_bytes;
  std::size_t pattern_count = 1;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::chrono::sys_seconds created_at{};
  std::string host_label;
  CalibrationSweep sweep;

  bool always_serial() const noexcept { return !threshold_bytes.has_value(); }

  /// Throws ContractViolation on threshold 0 or pattern_count 0.
  void validate() const;

  friend bool operator==(const Calibration&, const Calibration&) = default;
};

struct EngineChoice {
  Engine engine = Engine::kSerialAc;
  std::optional<std::uint64_t> threshold_bytes;
  std::size_t input_size = 0;
  friend bool operator==(const EngineChoice&, const EngineChoice&) = default;
};

/// Runs the sweep described by `params`, finds the crossover and turns it
/// into a threshold rounded to the nearest byte.
Calibration calibrate(const SweepParams& params, Clock& clock, std::string host_label);

/// Parallel iff a threshold exists and input_size >= threshold.
EngineChoice route(std::size_t input_size, const Calibration& calibration) noexcept;

// JSON file format. Unknown keys are rejected with FormatError.
std::string calibration_to_json(const Calibration& calibration);
Calibration calibration_from_json(std::string_view json);
void save_calibration(const std::filesystem::path& path, const Calibration& calibration);
Calibration load_calibration(const std::filesystem::path& path);

/// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_utc(std::chrono::sys_seconds time);
std::optional<std::chrono::sys_seconds> parse_utc(std::string_view text);

/// Host name, or "unknown".
std::string default_host_label();

struct DispatchResult {
  EngineChoice choice;
  std::vector<MatchEvent> matches;
};

/// Holds both compiled automata and a worker pool sized from the calibration,
/// so repeated requests reuse them. Safe for concurrent callers.
class Dispatcher {
 public:
  Dispatcher(const PatternSet& patterns, Calibration calibration);

  const Calibration& calibration() const noexcept { return calibration_; }

  /// Routes by text size and runs the chosen engine. The serial engine's
  /// output is filtered when longest-per-start semantics are requested, so
  /// the result never depends on which engine ran.
  DispatchResult match(std::string_view text, MatchSemantics semantics) const;

 private:
  Calibration calibration_;
  AcAutomaton automaton_;
  std::unique_ptr<WorkerPool> pool_;
};

DispatchResult dispatch_match(const PatternSet& patterns, std::string_view text,
                              const Calibration& calibration, MatchSemantics semantics);

}  // namespace acmatch
