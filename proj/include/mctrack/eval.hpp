#pragma once

#include <span>
#include <vector>

#include "mctrack/appearance.hpp"
#include "mctrack/completion.hpp"

namespace mct {

/// Center distance between two boxes, in pixels.
double tle(const Box& pred, const Box& gt);

/// Intersection over union.
double overlap(const Box& pred, const Box& gt);

struct Curve {
  std::vector<double> thresholds;
  std::vector<double> values;
};

/// Fraction of frames with TLE strictly below each threshold.
Curve precision_curve(std::span<const double> tles, std::span<const double> thresholds);
/// Fraction of frames with OR strictly above each threshold.
Curve success_curve(std::span<const double> ors, std::span<const double> thresholds);

double precision_at(std::span<const double> tles, double delta);
double success_at(std::span<const double> ors, double rho);

/// 0, 1, ..., 50 pixels.
std::vector<double> default_tle_thresholds();
/// 0, 0.02, ..., 1.
std::vector<double> default_or_thresholds();

inline constexpr double kPrecisionDelta = 20.0;
inline constexpr double kSuccessRho = 0.5;

struct EvalReport {
  std::vector<double> tle;
  std::vector<double> overlap;
  double mean_tle = 0.0;
  double median_tle = 0.0;
  double mean_or = 0.0;
  double precision = 0.0;  // at kPrecisionDelta
  double success = 0.0;    // at kSuccessRho
  Curve precision_curve;
  Curve success_curve;
};

/// Per-frame metrics over paired prediction/ground-truth boxes.
EvalReport evaluate(std::span<const Box> pred, std::span<const Box> gt);

struct LowDimensionDegree {
  int k = 0;
  double normalized = 0.0;
};

/// Smallest k whose leading singular values carry at least theta of the total.
LowDimensionDegree low_dimension_degree(const Matrix& targets, double theta);

}  // namespace mct
