#pragma once

// Observed-pixel index set and the per-pixel sampling weights that drive its
// online resampling.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mct {

using Rng = std::mt19937_64;

/// Sorted, duplicate-free pixel indices in [0, d).
class ObservationMask {
 public:
  ObservationMask() = default;
  /// Sorts the indices; throws InvalidMask on duplicates or indices >= d.
  ObservationMask(std::vector<int> indices, int d);

  static ObservationMask all(int d);

  const std::vector<int>& indices() const noexcept { return indices_; }
  int dim() const noexcept { return d_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  bool contains(int j) const;
  /// Dense membership flags, length d.
  std::vector<std::uint8_t> membership() const;

  bool operator==(const ObservationMask&) const = default;

 private:
  std::vector<int> indices_;
  int d_ = 0;
};

/// Positive weights summing to one.
struct PixelWeights {
  Eigen::VectorXd w;
};

/// Observed-set size for a given rate: round(obs_rate * d).
int observed_count(double obs_rate, int d);

PixelWeights init_weights(int d);

/// Error floor for unobserved pixels.
inline constexpr double kErrorFloor = 1e-6;

/// Reference errors bracketing the median of the nonzero errors.
struct MedianBracket {
  double below = 0.0;
  double median = 0.0;
  double above = 0.0;
};

/// e_a / e_b: the distinct nonzero errors adjacent below and above the median.
/// Falls back to (0.5 m, 1.5 m) with fewer than three distinct nonzero values.
MedianBracket median_bracket(std::span<const double> err);

/// Unobserved pixels get weight 1/(err + floor); observed pixels are assigned
/// an error interpolated inside [e_a, e_b] with coefficient `interp[j]`.
/// `interp` has length d (entries outside the mask are ignored).
PixelWeights update_weights(const Eigen::VectorXd& err, const ObservationMask& omega,
                            std::span<const double> interp);

/// Same, drawing the interpolation coefficients uniformly from `rng`, one per
/// observed pixel in ascending index order.
PixelWeights update_weights(const Eigen::VectorXd& err, const ObservationMask& omega, Rng& rng);

/// m distinct indices by successive renormalized weighted draws.
ObservationMask sample_mask(const PixelWeights& weights, int m, Rng& rng);

}  // namespace mct
