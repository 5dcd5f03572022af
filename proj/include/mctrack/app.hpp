#pragma once

// The `track`, `eval`, `synth` and `sweep` verbs, callable without a shell.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "mctrack/config.hpp"
#include "mctrack/eval.hpp"
#include "mctrack/io.hpp"

namespace mct {

struct AppOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> seq;
  std::optional<std::filesystem::path> gt;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  bool overlay = false;
  std::vector<double> sweep_rates;
};

struct TrackOutcome {
  std::vector<BoxRow> rows;
  std::optional<EvalReport> report;
};

struct SweepRow {
  double obs_rate = 0.0;
  double mean_tle = 0.0;
  double mean_or = 0.0;
};

/// Writes boxes.csv, plus metrics.json when ground truth is known.
TrackOutcome run_track(const AppOptions& opts);
/// Recomputes metrics.json from an existing boxes.csv.
EvalReport run_eval(const AppOptions& opts);
/// Writes a synthetic sequence in OTB layout.
void run_synth(const AppOptions& opts);
/// Tracks once per observation rate and writes sweep.csv.
std::vector<SweepRow> run_sweep(const AppOptions& opts);

std::string format_sweep_csv(const std::vector<SweepRow>& rows);
/// "0.3,0.5,0.7" -> {0.3, 0.5, 0.7}
std::vector<double> parse_rate_list(const std::string& text);

}  // namespace mct
