#pragma once

// Per-frame loop: sample candidate states around the previous target, estimate
// each candidate from the template subspace and its observed pixels, pick the
// best-estimated one, then update the observation mask and the templates.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mctrack/appearance.hpp"
#include "mctrack/completion.hpp"
#include "mctrack/error.hpp"
#include "mctrack/obs_mask.hpp"
#include "mctrack/templates.hpp"

namespace mct {

/// Per-frame standard deviations of the Gaussian motion model.
struct MotionNoise {
  double x = 3.0;
  double y = 3.0;
  double s = 0.005;
};

struct TrackerConfig {
  int num_candidates = 600;
  MotionNoise sigma;
  int patch_w = 20;
  int patch_h = 20;
  double obs_rate = 0.7;
  int n_templates = 10;
  SolverParams solver;
  TemplatePolicy templates;
  std::uint64_t seed = 1;
  /// Scoring threads; 0 picks the hardware concurrency.
  int workers = 1;

  void validate() const;
  int patch_dim() const noexcept { return patch_w * patch_h; }
};

struct CandidateScore {
  MotionState state;
  AppearanceVector c;
  /// Estimated candidate: the completed column, equal to c on the mask.
  AppearanceVector x_hat;
  double err = 0.0;
  int iterations = 0;
  bool converged = false;
  bool rejected = false;
};

struct CandidateSummary {
  MotionState state;
  double err = 0.0;
  int iterations = 0;
  bool rejected = false;
};

struct FrameResult {
  MotionState state;
  Box bbox;
  /// |y_k - x_k| per pixel of the selected target.
  Eigen::VectorXd err_map;
  /// Observation likelihood exp(-err) of the selected candidate.
  double score = 1.0;
  double err = 0.0;
  int iterations = 0;
  std::vector<CandidateSummary> per_candidate;
  /// Appearance of the selected target.
  AppearanceVector target;
  /// Mask in effect while this frame was scored.
  ObservationMask omega;
};

/// Everything carried from one frame to the next.
struct TrackerModel {
  MotionState state;
  PatchGeometry geom;
  TemplateSet templates;
  ObservationMask omega;
  PixelWeights weights;
};

class TrackerLost : public Error {
 public:
  TrackerLost(const MotionState& last, int frame)
      : Error(ErrorKind::TrackerLost, "all candidates rejected at frame " + std::to_string(frame)),
        last_(last), frame_(frame) {}

  const MotionState& last_state() const noexcept { return last_; }
  int frame() const noexcept { return frame_; }

 private:
  MotionState last_;
  int frame_;
};

/// Gaussian draws around z_prev; draws whose crop misses the frame are
/// retried up to 10 times, after which the last draw is clamped into it.
std::vector<MotionState> sample_candidates(const MotionState& z_prev, const TrackerConfig& cfg, Rng& rng,
                                           const GrayImage& frame, const PatchGeometry& geom);

CandidateScore score_candidate(const GrayImage& frame, const MotionState& state, const TemplateSet& ts,
                               const ObservationMask& omega, const PatchGeometry& geom, const SolverParams& solver);

/// Scores every state; `workers` threads, output independent of the count.
std::vector<CandidateScore> score_candidates(const GrayImage& frame, std::span<const MotionState> states,
                                             const TemplateSet& ts, const ObservationMask& omega,
                                             const PatchGeometry& geom, const SolverParams& solver, int workers);

/// Index of the smallest error, lowest index on ties; nullopt if every
/// candidate is rejected (non-finite error).
std::optional<std::size_t> select_candidate(std::span<const double> errs);

TrackerModel init_model(const GrayImage& frame, const Box& init_box, const TrackerConfig& cfg, Rng& rng);

/// Result reported for the first frame: the given box, nothing scored.
FrameResult initial_result(const TrackerModel& model, const Box& init_box);

/// One step of the loop. Updates `model` in place: weights, then mask, then templates.
FrameResult track_frame(const GrayImage& frame, TrackerModel& model, const TrackerConfig& cfg, Rng& rng,
                        int frame_index = 0);

std::vector<FrameResult> run_tracker(std::span<const GrayImage> frames, const Box& init_box, const TrackerConfig& cfg);

}  // namespace mct
