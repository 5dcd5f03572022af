#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mctrack/obs_mask.hpp"

namespace mct {

/// Single-channel image with intensities in [0, 1], stored row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(int row, int col) const { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  double& operator()(int row, int col) { return data_[static_cast<std::size_t>(row) * width_ + col]; }

  /// Pixel at (row, col) with coordinates clamped to the nearest border pixel.
  double clamped(int row, int col) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool operator==(const GrayImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// 8-bit gray samples, scaled by 1/255.
GrayImage gray_from_u8(int width, int height, std::span<const std::uint8_t> pixels);
/// Interleaved 8-bit RGB, converted with ITU-R 601 luma weights.
GrayImage gray_from_rgb8(int width, int height, std::span<const std::uint8_t> rgb);

/// Target position (center, pixels) and scale relative to the base box.
struct MotionState {
  double x = 0.0;
  double y = 0.0;
  double s = 1.0;

  auto operator<=>(const MotionState&) const = default;
};

/// Axis-aligned box: left, top, width, height.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double cx() const noexcept { return x + 0.5 * w; }
  double cy() const noexcept { return y + 0.5 * h; }
  bool operator==(const Box&) const = default;
};

struct PatchGeometry {
  double base_w = 20.0;
  double base_h = 20.0;
  int out_w = 20;
  int out_h = 20;

  int dim() const noexcept { return out_w * out_h; }
};

Box box_from_state(const MotionState& state, double base_w, double base_h);
MotionState state_from_box(const Box& box);

/// True when the crop rectangle of `state` overlaps the frame.
bool crop_intersects(const GrayImage& frame, const MotionState& state, double base_w, double base_h);

/// Bilinear resampling of the (s*base_w x s*base_h) rectangle centered at
/// (x, y) onto an out_w x out_h grid, pixel-center aligned, clamp-to-edge.
GrayImage crop_patch(const GrayImage& frame, const MotionState& state, const PatchGeometry& geom);

using AppearanceVector = Eigen::VectorXd;

/// Column-major stacking, clamped to [0, 1].
AppearanceVector to_vector(const GrayImage& patch);
GrayImage unstack(const AppearanceVector& v, int out_w, int out_h);

/// Appearance observation of a state: crop, then stack.
AppearanceVector appearance(const GrayImage& frame, const MotionState& state, const PatchGeometry& geom);

/// Zeroes the entries outside omega.
AppearanceVector mask_candidate(const AppearanceVector& c, const ObservationMask& omega);

}  // namespace mct
