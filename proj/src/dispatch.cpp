#include "acmatch/dispatch.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "acmatch/error.hpp"

namespace acmatch {

void Calibration::validate() const {
  if (threshold_bytes && *threshold_bytes == 0) {
    throw ContractViolation("calibration threshold must be positive");
  }
  if (pattern_count == 0) {
    throw ContractViolation("calibration pattern count must be positive");
  }
}

Calibration calibrate(const SweepParams& params, Clock& clock, std::string host_label) {
  const CrossoverReport report = find_crossover(sweep_sizes(params, clock), params.window);

  Calibration cal;
  if (report.crossover_size) {
    const auto rounded = static_cast<std::uint64_t>(std::llround(*report.crossover_size));
    cal.threshold_bytes = std::max<std::uint64_t>(1, rounded);
  }
  cal.pattern_count = params.pattern_count;
  cal.workers = params.workers;
  cal.seed = params.seed;
  cal.created_at = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  cal.host_label = std::move(host_label);
  cal.sweep = {params.base, params.steps, params.repetitions, params.window};
  return cal;
}

EngineChoice route(std::size_t input_size, const Calibration& calibration) noexcept {
  EngineChoice choice;
  choice.threshold_bytes = calibration.threshold_bytes;
  choice.input_size = input_size;
  const bool parallel = calibration.threshold_bytes && input_size >= *calibration.threshold_bytes;
  choice.engine = parallel ? Engine::kParallelFlac : Engine::kSerialAc;
  return choice;
}

// ---------------------------------------------------------------------------
// Calibration file

std::string format_utc(std::chrono::sys_seconds time) {
  using namespace std::chrono;
  const auto day = floor<days>(time);
  const year_month_day ymd{day};
  const hh_mm_ss hms{time - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

std::optional<std::chrono::sys_seconds> parse_utc(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 20) return std::nullopt;
  int y, mo, d, h, mi, s;
  char tail = 0;
  const std::string str(text);
  if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &tail) != 7 ||
      tail != 'Z' || str[4] != '-' || str[7] != '-' || str[10] != 'T' || str[13] != ':' ||
      str[16] != ':') {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string default_host_label() {
  char buf[256] = {};
  if (gethostname(buf, sizeof buf - 1) != 0 || buf[0] == '\0') return "unknown";
  return buf;
}

std::string calibration_to_json(const Calibration& cal) {
  nlohmann::ordered_json j;
  if (cal.threshold_bytes) {
    j["threshold_bytes"] = *cal.threshold_bytes;
  } else {
    j["threshold_bytes"] = "inf";
  }
  j["pattern_count"] = cal.pattern_count;
  j["workers"] = cal.workers;
  j["seed"] = cal.seed;
  j["created_at"] = format_utc(cal.created_at);
  j["host_label"] = cal.host_label;
  j["sweep"] = {{"base", cal.sweep.base},
                {"steps", cal.sweep.steps},
                {"reps", cal.sweep.repetitions},
                {"window", cal.sweep.window}};
  return j.dump(2) + "\n";
}

namespace {

std::uint64_t read_unsigned(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number_unsigned()) {
    throw FormatError("calibration: \"" + key + "\" must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

void require_exact_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                        const std::string& where) {
  if (!j.is_object()) throw FormatError("calibration: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw FormatError("calibration: unknown key \"" + key + "\" in " + where);
  }
  for (const char* k : keys) {
    if (!j.contains(k)) throw FormatError("calibration: missing key \"" + std::string(k) + "\" in " + where);
  }
}

}  // namespace

Calibration calibration_from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("calibration: ") + e.what());
  }
  require_exact_keys(doc,
                     {"threshold_bytes", "pattern_count", "workers", "seed", "created_at",
                      "host_label", "sweep"},
                     "document");
  require_exact_keys(doc["sweep"], {"base", "steps", "reps", "window"}, "\"sweep\"");

  Calibration cal;
  const auto& threshold = doc["threshold_bytes"];
  if (threshold.is_string()) {
    if (threshold.get<std::string>() != "inf") {
      throw FormatError("calibration: threshold_bytes must be an integer or \"inf\"");
    }
  } else {
    cal.threshold_bytes = read_unsigned(threshold, "threshold_bytes");
  }
  cal.pattern_count = read_unsigned(doc["pattern_count"], "pattern_count");
  cal.workers = read_unsigned(doc["workers"], "workers");
  cal.seed = read_unsigned(doc["seed"], "seed");
  if (!doc["created_at"].is_string()) throw FormatError("calibration: created_at must be a string");
  const auto created = parse_utc(doc["created_at"].get<std::string>());
  if (!created) throw FormatError("calibration: created_at is not YYYY-MM-DDTHH:MM:SSZ");
  cal.created_at = *created;
  if (!doc["host_label"].is_string()) throw FormatError("calibration: host_label must be a string");
  cal.host_label = doc["host_label"].get<std::string>();
  const auto& sweep = doc["sweep"];
  cal.sweep.base = read_unsigned(sweep["base"], "sweep.base");
  cal.sweep.steps = read_unsigned(sweep["steps"], "sweep.steps");
  cal.sweep.repetitions = read_unsigned(sweep["reps"], "sweep.reps");
  cal.sweep.window = read_unsigned(sweep["window"], "sweep.window");

  try {
    cal.validate();
  } catch (const ContractViolation& e) {
    throw FormatError(e.what());
  }
  if (cal.workers == 0) throw FormatError("calibration: workers must be positive");
  return cal;
}

void save_calibration(const std::filesystem::path& path, const Calibration& calibration) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << calibration_to_json(calibration);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

Calibration load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open calibration file " + path.string());
  std::string contents{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return calibration_from_json(contents);
}

// ---------------------------------------------------------------------------
// Dispatch

Dispatcher::Dispatcher(const PatternSet& patterns, Calibration calibration)
    : calibration_(std::move(calibration)), automaton_(build_automaton(patterns)) {
  calibration_.validate();
  if (!calibration_.always_serial()) {
    pool_ = std::make_unique<WorkerPool>(std::max<std::size_t>(1, calibration_.workers));
  }
}

DispatchResult Dispatcher::match(std::string_view text, MatchSemantics semantics) const {
  DispatchResult result;
  result.choice = route(text.size(), calibration_);
  if (result.choice.engine == Engine::kParallelFlac) {
    result.matches = match_parallel(automaton_.trie(), text, *pool_, semantics);
  } else {
    result.matches = match_serial(automaton_, text);
    if (semantics == MatchSemantics::kLongestPerStart) {
      result.matches = keep_longest_per_start(result.matches);
    }
  }
  return result;
}

DispatchResult dispatch_match(const PatternSet& patterns, std::string_view text,
                              const Calibration& calibration, MatchSemantics semantics) {
  return Dispatcher(patterns, calibration).match(text, semantics);
}

}  // namespace acmatch
