#include "mctrack/obs_mask.hpp"

#include <algorithm>
#include <cmath>

#include "mctrack/error.hpp"

namespace mct {

ObservationMask::ObservationMask(std::vector<int> indices, int d) : indices_(std::move(indices)), d_(d) {
  if (d < 0) throw Error(ErrorKind::InvalidMask, "negative dimension");
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw Error(ErrorKind::InvalidMask, "duplicate index");
  }
  if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= d)) {
    throw Error(ErrorKind::InvalidMask, "index out of range");
  }
}

ObservationMask ObservationMask::all(int d) {
  std::vector<int> idx(static_cast<std::size_t>(std::max(d, 0)));
  for (int j = 0; j < d; ++j) idx[j] = j;
  return ObservationMask(std::move(idx), d);
}

bool ObservationMask::contains(int j) const { return std::binary_search(indices_.begin(), indices_.end(), j); }

std::vector<std::uint8_t> ObservationMask::membership() const {
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(d_), 0);
  for (int j : indices_) flags[j] = 1;
  return flags;
}

int observed_count(double obs_rate, int d) { return static_cast<int>(std::lround(obs_rate * d)); }

PixelWeights init_weights(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "weight dimension must be >= 1");
  return {Eigen::VectorXd::Constant(d, 1.0 / d)};
}

MedianBracket median_bracket(std::span<const double> err) {
  std::vector<double> nonzero;
  for (double e : err) {
    if (e > 0.0) nonzero.push_back(e);
  }
  MedianBracket b;
  if (nonzero.empty()) return b;
  std::sort(nonzero.begin(), nonzero.end());
  const std::size_t n = nonzero.size();
  b.median = n % 2 == 1 ? nonzero[n / 2] : 0.5 * (nonzero[n / 2 - 1] + nonzero[n / 2]);

  std::vector<double> distinct = nonzero;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  b.below = 0.5 * b.median;
  b.above = 1.5 * b.median;
  if (distinct.size() < 3) return b;

  auto upper = std::upper_bound(distinct.begin(), distinct.end(), b.median);
  auto lower = std::lower_bound(distinct.begin(), distinct.end(), b.median);
  if (lower == distinct.begin() || upper == distinct.end()) return b;
  b.below = *std::prev(lower);
  b.above = *upper;
  return b;
}

PixelWeights update_weights(const Eigen::VectorXd& err, const ObservationMask& omega,
                            std::span<const double> interp) {
  const int d = static_cast<int>(err.size());
  if (d < 1 || omega.dim() != d) throw Error(ErrorKind::DimensionMismatch, "error map and mask disagree");
  if (interp.size() != static_cast<std::size_t>(d)) {
    throw Error(ErrorKind::DimensionMismatch, "interpolation coefficients must have length d");
  }
  if (!err.allFinite() || (err.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidInput, "errors must be finite and non-negative");
  }
  if ((err.array() == 0.0).all()) return init_weights(d);

  const MedianBracket bracket = median_bracket(std::span<const double>(err.data(), err.size()));
  const auto observed = omega.membership();
  Eigen::VectorXd w(d);
  for (int j = 0; j < d; ++j) {
    if (observed[j]) {
      const double u = std::clamp(interp[j], 0.0, 1.0);
      w(j) = 1.0 / (bracket.below + u * (bracket.above - bracket.below));
    } else {
      w(j) = 1.0 / (err(j) + kErrorFloor);
    }
  }
  w /= w.sum();
  return {std::move(w)};
}

PixelWeights update_weights(const Eigen::VectorXd& err, const ObservationMask& omega, Rng& rng) {
  std::vector<double> interp(static_cast<std::size_t>(err.size()), 0.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int j : omega.indices()) {
    if (j < static_cast<int>(interp.size())) interp[j] = unit(rng);
  }
  return update_weights(err, omega, interp);
}

ObservationMask sample_mask(const PixelWeights& weights, int m, Rng& rng) {
  const int d = static_cast<int>(weights.w.size());
  if (m < 0 || m > d) throw Error(ErrorKind::InvalidInput, "mask size must lie in [0, d]");
  if (!weights.w.allFinite() || (weights.w.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidInput, "weights must be finite and non-negative");
  }
  if (m == d) return ObservationMask::all(d);

  std::vector<double> remaining(weights.w.data(), weights.w.data() + d);
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(m));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int draw = 0; draw < m; ++draw) {
    double total = 0.0;
    for (double r : remaining) total += r;
    int chosen = -1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (int j = 0; j < d; ++j) {
        if (remaining[j] <= 0.0) continue;
        acc += remaining[j];
        chosen = j;
        if (acc > target) break;
      }
    } else {
      // Only zero-weight pixels left: take them in index order.
      for (int j = 0; j < d && chosen < 0; ++j) {
        if (std::find(picked.begin(), picked.end(), j) == picked.end()) chosen = j;
      }
    }
    picked.push_back(chosen);
    remaining[chosen] = 0.0;
  }
  return ObservationMask(std::move(picked), d);
}

}  // namespace mct
