#include "mctrack/templates.hpp"

#include <algorithm>
#include <cmath>

#include "mctrack/error.hpp"

namespace mct {

std::vector<std::pair<int, int>> seed_offsets(int count) {
  static constexpr std::pair<int, int> kRing[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < count; ++i) out.push_back(kRing[i % 8]);
  return out;
}

TemplateSet init_templates(const AppearanceVector& y1, const GrayImage& frame, const MotionState& state,
                           const PatchGeometry& geom, int n) {
  if (n < 1) throw Error(ErrorKind::Init, "template count must be >= 1");
  if (!(state.s > 0.0) || geom.base_w <= 0 || geom.base_h <= 0) throw Error(ErrorKind::Init, "degenerate first box");
  if (y1.size() != geom.dim()) throw Error(ErrorKind::Init, "first appearance has the wrong length");

  TemplateSet ts;
  ts.t.resize(y1.size(), n);
  ts.t.col(0) = y1;
  const auto offsets = seed_offsets(n - 1);
  for (int k = 1; k < n; ++k) {
    MotionState shifted = state;
    shifted.x += offsets[k - 1].first;
    shifted.y += offsets[k - 1].second;
    ts.t.col(k) = appearance(frame, shifted, geom);
  }
  ts.weights = Vector::Constant(n, 1.0 / n);
  return ts;
}

double cosine_similarity(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return na == nb ? 1.0 : 0.0;
  return a.dot(b) / (na * nb);
}

TemplateSet update_templates(const TemplateSet& ts, const AppearanceVector& y, const TemplatePolicy& policy) {
  if (y.size() != ts.dim()) throw Error(ErrorKind::DimensionMismatch, "target length differs from templates");
  TemplateSet out = ts;
  const int n = ts.count();
  Vector sim(n);
  for (int i = 0; i < n; ++i) sim(i) = cosine_similarity(y, ts.t.col(i));

  if (sim.maxCoeff() < policy.sim_threshold) {
    Eigen::Index weakest = 0;
    out.weights.minCoeff(&weakest);  // first minimum on ties
    std::vector<double> sorted(out.weights.data(), out.weights.data() + n);
    std::sort(sorted.begin(), sorted.end());
    const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    out.t.col(weakest) = y;
    out.weights(weakest) = median;
    sim(weakest) = 1.0;
  }
  out.weights.array() *= (policy.alpha * sim.array()).exp();
  out.weights *= n / out.weights.sum();
  return out;
}

CompletionProblem assemble(const TemplateSet& ts, const AppearanceVector& c_prime, const ObservationMask& omega) {
  const int d = ts.dim();
  const int n = ts.count();
  if (c_prime.size() != d || omega.dim() != d) throw Error(ErrorKind::DimensionMismatch, "candidate and templates disagree");
  Matrix y(d, n + 1);
  y.leftCols(n) = ts.t;
  y.col(n).setZero();
  ObservedMask observed = ObservedMask::Constant(d, n + 1, true);
  observed.col(n).setConstant(false);
  for (int j : omega.indices()) {
    y(j, n) = c_prime(j);
    observed(j, n) = true;
  }
  return CompletionProblem(std::move(y), std::move(observed));
}

}  // namespace mct
