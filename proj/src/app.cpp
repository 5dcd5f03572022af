#include "mctrack/app.hpp"

#include <fmt/format.h>

#include "mctrack/error.hpp"
#include "mctrack/render.hpp"
#include "mctrack/synthetic.hpp"

namespace mct {
namespace fs = std::filesystem;

namespace {

struct Input {
  std::vector<GrayImage> frames;
  std::optional<std::vector<Box>> truth;
  Box init;
};

RunConfig resolve_config(const AppOptions& opts) {
  RunConfig cfg = opts.config ? load_config(*opts.config) : RunConfig{};
  if (opts.seed) cfg.tracker.seed = *opts.seed;
  return cfg;
}

Input resolve_input(const AppOptions& opts, const RunConfig& cfg) {
  Input in;
  if (opts.seq) {
    if (!opts.gt) throw Error(ErrorKind::Usage, "--seq needs --gt for the initial box");
    LoadedSequence seq = load_sequence(*opts.seq);
    in.truth = load_groundtruth(*opts.gt, seq.source.frame_count());
    in.frames = std::move(seq.frames);
  } else {
    SyntheticSequence seq = generate_synthetic(cfg.synthetic);
    in.frames = std::move(seq.frames);
    in.truth = opts.gt ? load_groundtruth(*opts.gt, static_cast<int>(in.frames.size())) : std::move(seq.truth);
  }
  in.init = in.truth->front();
  return in;
}

std::vector<Box> boxes_of(const std::vector<BoxRow>& rows) {
  std::vector<Box> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.box);
  return out;
}

std::vector<FrameResult> track_sequence(const Input& in, const TrackerConfig& cfg, const AppOptions& opts, bool render) {
  Rng rng(cfg.seed);
  TrackerModel model = init_model(in.frames[0], in.init, cfg, rng);
  std::vector<FrameResult> results;
  results.push_back(initial_result(model, in.init));
  for (std::size_t k = 1; k < in.frames.size(); ++k) {
    results.push_back(track_frame(in.frames[k], model, cfg, rng, static_cast<int>(k)));
  }

  if (render) {
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto name = fmt::format("{:06d}", k);
      std::optional<Box> truth;
      if (in.truth) truth = (*in.truth)[k];
      write_overlay(opts.out / "overlay" / (name + ".png"), in.frames[k], results[k].bbox, truth);
      write_mask_view(opts.out / "mask" / (name + ".png"), results[k].target, results[k].omega, cfg.patch_w, cfg.patch_h);
      std::string idx;
      for (int j : results[k].omega.indices()) idx += fmt::format("{}\n", j);
      write_text(opts.out / "mask" / (name + ".txt"), idx);
    }
    write_template_montage(opts.out / "templates.png", model.templates, cfg.patch_w, cfg.patch_h);
  }
  return results;
}

}  // namespace

std::vector<double> parse_rate_list(const std::string& text) {
  std::vector<double> rates;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string token = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      const double r = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      if (!(r > 0.0) || r > 1.0) throw Error(ErrorKind::Usage, "observation rate out of (0, 1]: " + token);
      rates.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Usage, "bad observation rate '" + token + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return rates;
}

TrackOutcome run_track(const AppOptions& opts) {
  if (!opts.sweep_rates.empty()) throw Error(ErrorKind::Usage, "--sweep-obs-rate belongs to the sweep verb");
  const RunConfig cfg = resolve_config(opts);
  const Input in = resolve_input(opts, cfg);
  const auto results = track_sequence(in, cfg.tracker, opts, opts.overlay);

  TrackOutcome outcome;
  const std::string csv = format_boxes_csv(to_rows(results));
  write_text(opts.out / "boxes.csv", csv);
  // Metrics come from the CSV text so that offline re-evaluation agrees exactly.
  outcome.rows = parse_boxes_csv(csv);
  if (in.truth) {
    outcome.report = evaluate(boxes_of(outcome.rows), *in.truth);
    write_text(opts.out / "metrics.json", format_metrics_json(*outcome.report));
  }
  return outcome;
}

EvalReport run_eval(const AppOptions& opts) {
  if (opts.overlay || !opts.sweep_rates.empty()) throw Error(ErrorKind::Usage, "eval takes no --overlay or --sweep-obs-rate");
  const std::vector<BoxRow> rows = read_boxes_csv(opts.out / "boxes.csv");
  std::vector<Box> truth;
  if (opts.gt) {
    truth = load_groundtruth(*opts.gt, static_cast<int>(rows.size()));
  } else {
    truth = generate_synthetic(resolve_config(opts).synthetic).truth;
    if (truth.size() != rows.size()) throw Error(ErrorKind::Ingestion, "boxes.csv does not match the synthetic sequence length");
  }
  EvalReport report = evaluate(boxes_of(rows), truth);
  write_text(opts.out / "metrics.json", format_metrics_json(report));
  return report;
}

void run_synth(const AppOptions& opts) {
  if (opts.overlay || !opts.sweep_rates.empty() || opts.seq || opts.gt) {
    throw Error(ErrorKind::Usage, "synth takes only --config, --seed and --out");
  }
  RunConfig cfg = opts.config ? load_config(*opts.config) : RunConfig{};
  if (opts.seed) cfg.synthetic.seed = *opts.seed;
  const SyntheticSequence seq = generate_synthetic(cfg.synthetic);
  save_sequence(opts.out, seq.frames, seq.truth);
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "obs_rate,mean_tle,mean_or\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{}\n", format_double(r.obs_rate), format_double(r.mean_tle), format_double(r.mean_or));
  }
  return out;
}

std::vector<SweepRow> run_sweep(const AppOptions& opts) {
  if (opts.sweep_rates.empty()) throw Error(ErrorKind::Usage, "sweep needs --sweep-obs-rate");
  if (opts.overlay) throw Error(ErrorKind::Usage, "--overlay cannot be combined with a sweep");
  const RunConfig cfg = resolve_config(opts);
  const Input in = resolve_input(opts, cfg);
  if (!in.truth) throw Error(ErrorKind::Usage, "sweep needs ground truth");

  std::vector<SweepRow> rows;
  for (double rate : opts.sweep_rates) {
    TrackerConfig tc = cfg.tracker;
    tc.obs_rate = rate;
    tc.validate();
    const auto results = track_sequence(in, tc, opts, false);
    const auto parsed = parse_boxes_csv(format_boxes_csv(to_rows(results)));
    const EvalReport report = evaluate(boxes_of(parsed), *in.truth);
    rows.push_back({rate, report.mean_tle, report.mean_or});
  }
  write_text(opts.out / "sweep.csv", format_sweep_csv(rows));
  return rows;
}

}  // namespace mct
