#pragma once

#include "mctrack/appearance.hpp"
#include "mctrack/completion.hpp"
#include "mctrack/obs_mask.hpp"

namespace mct {

struct TemplatePolicy {
  /// Cosine similarity below which the newest target replaces a template.
  double sim_threshold = 0.85;
  /// Weight growth rate: weights are scaled by exp(alpha * sim).
  double alpha = 0.2;
};

/// d x n matrix of past target appearances with per-template weights.
struct TemplateSet {
  Matrix t;
  Vector weights;

  int count() const noexcept { return static_cast<int>(t.cols()); }
  int dim() const noexcept { return static_cast<int>(t.rows()); }
};

/// Pixel offsets used to seed the templates around the first target: the
/// eight one-pixel neighbours, repeated when more are needed.
std::vector<std::pair<int, int>> seed_offsets(int count);

/// Column 0 is y1; the remaining columns are crops at shifted initial states.
TemplateSet init_templates(const AppearanceVector& y1, const GrayImage& frame, const MotionState& state,
                           const PatchGeometry& geom, int n);

double cosine_similarity(const Vector& a, const Vector& b);

/// Similarity-gated replacement of the least-weighted template.
TemplateSet update_templates(const TemplateSet& ts, const AppearanceVector& y, const TemplatePolicy& policy = {});

/// Y = [T, c'] with every template entry observed and column n observed at omega.
CompletionProblem assemble(const TemplateSet& ts, const AppearanceVector& c_prime, const ObservationMask& omega);

}  // namespace mct
