#include "mctrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace mct {

void TrackerConfig::validate() const {
  if (num_candidates < 1) throw Error(ErrorKind::InvalidInput, "num_candidates must be >= 1");
  if (!(sigma.x > 0.0) || !(sigma.y > 0.0) || !(sigma.s > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "motion noise components must be positive");
  }
  if (patch_w < 1 || patch_h < 1) throw Error(ErrorKind::InvalidInput, "patch size must be positive");
  if (!(obs_rate > 0.0) || obs_rate > 1.0) throw Error(ErrorKind::InvalidInput, "obs_rate must lie in (0, 1]");
  if (observed_count(obs_rate, patch_dim()) < 1) throw Error(ErrorKind::InvalidInput, "obs_rate observes no pixels");
  if (n_templates < 1) throw Error(ErrorKind::InvalidInput, "n_templates must be >= 1");
  if (workers < 0) throw Error(ErrorKind::InvalidInput, "workers must be >= 0");
  solver.validate();
}

std::vector<MotionState> sample_candidates(const MotionState& z_prev, const TrackerConfig& cfg, Rng& rng,
                                           const GrayImage& frame, const PatchGeometry& geom) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<MotionState> out;
  out.reserve(static_cast<std::size_t>(cfg.num_candidates));
  for (int i = 0; i < cfg.num_candidates; ++i) {
    MotionState z;
    bool valid = false;
    for (int attempt = 0; attempt < 10 && !valid; ++attempt) {
      z.x = z_prev.x + cfg.sigma.x * gauss(rng);
      z.y = z_prev.y + cfg.sigma.y * gauss(rng);
      z.s = z_prev.s + cfg.sigma.s * gauss(rng);
      valid = z.s > 0.0 && crop_intersects(frame, z, geom.base_w, geom.base_h);
    }
    if (!valid) {
      z.x = std::clamp(z.x, 0.0, frame.width() - 1.0);
      z.y = std::clamp(z.y, 0.0, frame.height() - 1.0);
      z.s = std::max(z.s, z_prev.s);
    }
    out.push_back(z);
  }
  return out;
}

CandidateScore score_candidate(const GrayImage& frame, const MotionState& state, const TemplateSet& ts,
                               const ObservationMask& omega, const PatchGeometry& geom, const SolverParams& solver) {
  CandidateScore out;
  out.state = state;
  try {
    out.c = appearance(frame, state, geom);
    const CompletionProblem problem = assemble(ts, mask_candidate(out.c, omega), omega);
    const CompletionResult res = complete(problem, solver);
    const Eigen::Index last = problem.y().cols() - 1;
    out.x_hat = problem.y().col(last) - res.e.col(last);
    out.err = (out.c - out.x_hat).norm();
    out.iterations = res.iterations;
    out.converged = res.converged;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateProblem && e.kind() != ErrorKind::InvalidState) throw;
    out.rejected = true;
    out.err = std::numeric_limits<double>::infinity();
  }
  return out;
}

std::vector<CandidateScore> score_candidates(const GrayImage& frame, std::span<const MotionState> states,
                                             const TemplateSet& ts, const ObservationMask& omega,
                                             const PatchGeometry& geom, const SolverParams& solver, int workers) {
  std::vector<CandidateScore> out(states.size());
  if (workers == 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(states.size(), 1)));

  auto run = [&](std::size_t first) {
    for (std::size_t i = first; i < states.size(); i += static_cast<std::size_t>(workers)) {
      out[i] = score_candidate(frame, states[i], ts, omega, geom, solver);
    }
  };
  if (workers == 1) {
    run(0);
    return out;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run(static_cast<std::size_t>(w));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::optional<std::size_t> select_candidate(std::span<const double> errs) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < errs.size(); ++i) {
    if (!std::isfinite(errs[i])) continue;
    if (!best || errs[i] < errs[*best]) best = i;
  }
  return best;
}

TrackerModel init_model(const GrayImage& frame, const Box& init_box, const TrackerConfig& cfg, Rng& rng) {
  cfg.validate();
  if (frame.empty()) throw Error(ErrorKind::Init, "empty first frame");
  if (!(init_box.w > 0.0) || !(init_box.h > 0.0)) throw Error(ErrorKind::Init, "degenerate initial box");
  TrackerModel model;
  model.state = state_from_box(init_box);
  model.geom = {init_box.w, init_box.h, cfg.patch_w, cfg.patch_h};
  if (!crop_intersects(frame, model.state, init_box.w, init_box.h)) {
    throw Error(ErrorKind::Init, "initial box lies outside the first frame");
  }
  const AppearanceVector y1 = appearance(frame, model.state, model.geom);
  model.templates = init_templates(y1, frame, model.state, model.geom, cfg.n_templates);
  model.weights = init_weights(cfg.patch_dim());
  model.omega = sample_mask(model.weights, observed_count(cfg.obs_rate, cfg.patch_dim()), rng);
  return model;
}

FrameResult initial_result(const TrackerModel& model, const Box& init_box) {
  FrameResult first;
  first.state = model.state;
  first.bbox = init_box;
  first.err_map = Eigen::VectorXd::Zero(model.geom.dim());
  first.omega = model.omega;
  first.target = model.templates.t.col(0);
  return first;
}

FrameResult track_frame(const GrayImage& frame, TrackerModel& model, const TrackerConfig& cfg, Rng& rng,
                        int frame_index) {
  std::vector<MotionState> states = sample_candidates(model.state, cfg, rng, frame, model.geom);
  std::sort(states.begin(), states.end());

  const std::vector<CandidateScore> scores =
      score_candidates(frame, states, model.templates, model.omega, model.geom, cfg.solver, cfg.workers);
  std::vector<double> errs(scores.size());
  std::transform(scores.begin(), scores.end(), errs.begin(), [](const CandidateScore& s) { return s.err; });
  const auto best = select_candidate(errs);
  if (!best) throw TrackerLost(model.state, frame_index);
  const CandidateScore& winner = scores[*best];

  FrameResult result;
  result.state = winner.state;
  result.bbox = box_from_state(winner.state, model.geom.base_w, model.geom.base_h);
  result.err_map = (winner.c - winner.x_hat).cwiseAbs();
  result.err = winner.err;
  result.score = std::exp(-winner.err);
  result.iterations = winner.iterations;
  result.omega = model.omega;
  result.target = winner.c;
  result.per_candidate.reserve(scores.size());
  for (const auto& s : scores) result.per_candidate.push_back({s.state, s.err, s.iterations, s.rejected});

  model.state = winner.state;
  model.weights = update_weights(result.err_map, model.omega, rng);
  model.omega = sample_mask(model.weights, model.omega.size(), rng);
  model.templates = update_templates(model.templates, winner.c, cfg.templates);
  return result;
}

std::vector<FrameResult> run_tracker(std::span<const GrayImage> frames, const Box& init_box, const TrackerConfig& cfg) {
  if (frames.empty()) throw Error(ErrorKind::Ingestion, "empty sequence");
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (frames[k].empty() || frames[k].width() != frames[0].width() || frames[k].height() != frames[0].height()) {
      throw Error(ErrorKind::Ingestion, "unreadable frame " + std::to_string(k));
    }
  }
  Rng rng(cfg.seed);
  TrackerModel model = init_model(frames[0], init_box, cfg, rng);

  std::vector<FrameResult> out;
  out.reserve(frames.size());
  out.push_back(initial_result(model, init_box));

  for (std::size_t k = 1; k < frames.size(); ++k) {
    out.push_back(track_frame(frames[k], model, cfg, rng, static_cast<int>(k)));
  }
  return out;
}

}  // namespace mct
