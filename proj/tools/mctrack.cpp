// Command-line front end: track, eval, synth, sweep.

#include <iostream>

#include "CLI11.hpp"
#include "mctrack/app.hpp"
#include "mctrack/error.hpp"

namespace {

void add_common(CLI::App* cmd, mct::AppOptions& opts) {
  cmd->add_option("--config", opts.config, "Flat JSON config (tracker and synthetic settings)");
  cmd->add_option("--out", opts.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Override the random seed");
}

void add_input(CLI::App* cmd, mct::AppOptions& opts) {
  cmd->add_option("--seq", opts.seq, "Image directory (OTB layout accepted); synthetic demo if omitted");
  cmd->add_option("--gt", opts.gt, "Ground truth, one x,y,w,h line per frame");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tracking by low-rank matrix completion"};
  app.require_subcommand(1);
  mct::AppOptions opts;
  std::string rates;

  auto* track = app.add_subcommand("track", "Track a sequence and write boxes.csv / metrics.json");
  add_common(track, opts);
  add_input(track, opts);
  track->add_flag("--overlay", opts.overlay, "Write overlay/, mask/ and templates.png");
  track->add_option("--sweep-obs-rate", rates, "Not valid here; use the sweep verb");

  auto* eval = app.add_subcommand("eval", "Recompute metrics.json from <out>/boxes.csv");
  add_common(eval, opts);
  eval->add_option("--gt", opts.gt, "Ground truth; synthetic truth from the config if omitted");
  eval->add_flag("--overlay", opts.overlay, "Not valid here");

  auto* synth = app.add_subcommand("synth", "Write a synthetic sequence in OTB layout");
  add_common(synth, opts);

  auto* sweep = app.add_subcommand("sweep", "Track once per observation rate and write sweep.csv");
  add_common(sweep, opts);
  add_input(sweep, opts);
  sweep->add_option("--sweep-obs-rate", rates, "Comma-separated observation rates")->required();
  sweep->add_flag("--overlay", opts.overlay, "Not valid here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!rates.empty()) opts.sweep_rates = mct::parse_rate_list(rates);
    if (track->parsed()) {
      const auto outcome = mct::run_track(opts);
      std::cout << "frames: " << outcome.rows.size() << "\n";
      if (outcome.report) {
        std::cout << "mean TLE: " << outcome.report->mean_tle << "\n"
                  << "precision@20: " << outcome.report->precision << "\n"
                  << "mean OR: " << outcome.report->mean_or << "\n"
                  << "SR@0.5: " << outcome.report->success << "\n";
      }
    } else if (eval->parsed()) {
      const auto report = mct::run_eval(opts);
      std::cout << "mean TLE: " << report.mean_tle << "\nprecision@20: " << report.precision
                << "\nmean OR: " << report.mean_or << "\nSR@0.5: " << report.success << "\n";
    } else if (synth->parsed()) {
      mct::run_synth(opts);
      std::cout << "wrote " << opts.out.string() << "\n";
    } else if (sweep->parsed()) {
      for (const auto& row : mct::run_sweep(opts)) {
        std::cout << row.obs_rate << "\t" << row.mean_tle << "\t" << row.mean_or << "\n";
      }
    }
  } catch (const mct::Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == mct::ErrorKind::Usage ? 2 : 1;
  }
  return 0;
}
