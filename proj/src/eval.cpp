#include "mctrack/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "mctrack/error.hpp"

namespace mct {
namespace {

void require_nonempty(std::span<const double> series) {
  if (series.empty()) throw Error(ErrorKind::InvalidInput, "empty metric series");
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double tle(const Box& pred, const Box& gt) { return std::hypot(pred.cx() - gt.cx(), pred.cy() - gt.cy()); }

double overlap(const Box& pred, const Box& gt) {
  const double iw = std::max(0.0, std::min(pred.x + pred.w, gt.x + gt.w) - std::max(pred.x, gt.x));
  const double ih = std::max(0.0, std::min(pred.y + pred.h, gt.y + gt.h) - std::max(pred.y, gt.y));
  const double inter = iw * ih;
  const double uni = pred.w * pred.h + gt.w * gt.h - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double precision_at(std::span<const double> tles, double delta) {
  require_nonempty(tles);
  const auto hits = std::count_if(tles.begin(), tles.end(), [delta](double t) { return t < delta; });
  return static_cast<double>(hits) / tles.size();
}

double success_at(std::span<const double> ors, double rho) {
  require_nonempty(ors);
  const auto hits = std::count_if(ors.begin(), ors.end(), [rho](double o) { return o > rho; });
  return static_cast<double>(hits) / ors.size();
}

Curve precision_curve(std::span<const double> tles, std::span<const double> thresholds) {
  Curve c{{thresholds.begin(), thresholds.end()}, {}};
  for (double t : thresholds) c.values.push_back(precision_at(tles, t));
  return c;
}

Curve success_curve(std::span<const double> ors, std::span<const double> thresholds) {
  Curve c{{thresholds.begin(), thresholds.end()}, {}};
  for (double t : thresholds) c.values.push_back(success_at(ors, t));
  return c;
}

std::vector<double> default_tle_thresholds() {
  std::vector<double> t(51);
  for (int i = 0; i <= 50; ++i) t[i] = i;
  return t;
}

std::vector<double> default_or_thresholds() {
  std::vector<double> t(51);
  for (int i = 0; i <= 50; ++i) t[i] = i / 50.0;
  return t;
}

EvalReport evaluate(std::span<const Box> pred, std::span<const Box> gt) {
  if (pred.size() != gt.size()) throw Error(ErrorKind::DimensionMismatch, "prediction and ground-truth counts differ");
  if (pred.empty()) throw Error(ErrorKind::InvalidInput, "empty metric series");
  EvalReport r;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    r.tle.push_back(tle(pred[k], gt[k]));
    r.overlap.push_back(overlap(pred[k], gt[k]));
  }
  r.mean_tle = mean(r.tle);
  r.median_tle = median(r.tle);
  r.mean_or = mean(r.overlap);
  r.precision = precision_at(r.tle, kPrecisionDelta);
  r.success = success_at(r.overlap, kSuccessRho);
  r.precision_curve = precision_curve(r.tle, default_tle_thresholds());
  r.success_curve = success_curve(r.overlap, default_or_thresholds());
  return r;
}

LowDimensionDegree low_dimension_degree(const Matrix& targets, double theta) {
  if (targets.cols() < 1 || targets.rows() < 1) throw Error(ErrorKind::InvalidInput, "empty target matrix");
  if (!(theta > 0.0) || theta > 1.0) throw Error(ErrorKind::InvalidInput, "theta must lie in (0, 1]");
  if (!targets.allFinite()) throw Error(ErrorKind::InvalidInput, "target matrix has non-finite entries");
  Eigen::BDCSVD<Matrix> svd(targets);
  const Vector& sv = svd.singularValues();
  const double total = sv.sum();
  LowDimensionDegree out;
  if (total == 0.0) return out;
  const double goal = theta * total * (1.0 - 1e-12);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    acc += sv(i);
    if (acc >= goal) {
      out.k = static_cast<int>(i + 1);
      break;
    }
  }
  if (out.k == 0) out.k = static_cast<int>(sv.size());
  out.normalized = static_cast<double>(out.k) / std::min(targets.rows(), targets.cols());
  return out;
}

}  // namespace mct
