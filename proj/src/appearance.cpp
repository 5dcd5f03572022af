#include "mctrack/appearance.hpp"

#include <algorithm>
#include <cmath>

#include "mctrack/error.hpp"

namespace mct {

GrayImage::GrayImage(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw Error(ErrorKind::InvalidInput, "negative image size");
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

double GrayImage::clamped(int row, int col) const {
  row = std::clamp(row, 0, height_ - 1);
  col = std::clamp(col, 0, width_ - 1);
  return (*this)(row, col);
}

GrayImage gray_from_u8(int width, int height, std::span<const std::uint8_t> pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorKind::DimensionMismatch, "gray buffer size");
  }
  GrayImage img(width, height);
  std::transform(pixels.begin(), pixels.end(), img.data().begin(), [](std::uint8_t p) { return p / 255.0; });
  return img;
}

GrayImage gray_from_rgb8(int width, int height, std::span<const std::uint8_t> rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error(ErrorKind::DimensionMismatch, "rgb buffer size");
  }
  GrayImage img(width, height);
  auto out = img.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double luma = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
    out[i] = std::clamp(luma / 255.0, 0.0, 1.0);
  }
  return img;
}

Box box_from_state(const MotionState& state, double base_w, double base_h) {
  const double w = state.s * base_w;
  const double h = state.s * base_h;
  return {state.x - 0.5 * w, state.y - 0.5 * h, w, h};
}

MotionState state_from_box(const Box& box) { return {box.cx(), box.cy(), 1.0}; }

bool crop_intersects(const GrayImage& frame, const MotionState& state, double base_w, double base_h) {
  const Box b = box_from_state(state, base_w, base_h);
  return b.w > 0 && b.h > 0 && b.x < frame.width() && b.y < frame.height() && b.x + b.w > 0 && b.y + b.h > 0;
}

GrayImage crop_patch(const GrayImage& frame, const MotionState& state, const PatchGeometry& geom) {
  if (frame.empty()) throw Error(ErrorKind::InvalidInput, "empty frame");
  if (geom.out_w <= 0 || geom.out_h <= 0) throw Error(ErrorKind::InvalidInput, "output patch size must be positive");
  const Box box = box_from_state(state, geom.base_w, geom.base_h);
  if (!(box.w > 0.0) || !(box.h > 0.0)) throw Error(ErrorKind::InvalidState, "zero-area crop rectangle");
  if (!crop_intersects(frame, state, geom.base_w, geom.base_h)) {
    throw Error(ErrorKind::InvalidState, "crop rectangle lies outside the frame");
  }

  const double step_x = box.w / geom.out_w;
  const double step_y = box.h / geom.out_h;
  std::vector<int> col0(geom.out_w);
  std::vector<double> fx(geom.out_w);
  for (int i = 0; i < geom.out_w; ++i) {
    const double sx = box.x + (i + 0.5) * step_x - 0.5;
    const double fl = std::floor(sx);
    col0[i] = static_cast<int>(fl);
    fx[i] = sx - fl;
  }

  GrayImage patch(geom.out_w, geom.out_h);
  for (int r = 0; r < geom.out_h; ++r) {
    const double sy = box.y + (r + 0.5) * step_y - 0.5;
    const double fl = std::floor(sy);
    const int row0 = static_cast<int>(fl);
    const double fy = sy - fl;
    for (int i = 0; i < geom.out_w; ++i) {
      const int c0 = col0[i];
      const double top = (1.0 - fx[i]) * frame.clamped(row0, c0) + fx[i] * frame.clamped(row0, c0 + 1);
      const double bottom = (1.0 - fx[i]) * frame.clamped(row0 + 1, c0) + fx[i] * frame.clamped(row0 + 1, c0 + 1);
      patch(r, i) = (1.0 - fy) * top + fy * bottom;
    }
  }
  return patch;
}

AppearanceVector to_vector(const GrayImage& patch) {
  AppearanceVector v(static_cast<Eigen::Index>(patch.width()) * patch.height());
  Eigen::Index k = 0;
  for (int c = 0; c < patch.width(); ++c) {
    for (int r = 0; r < patch.height(); ++r) v(k++) = std::clamp(patch(r, c), 0.0, 1.0);
  }
  return v;
}

GrayImage unstack(const AppearanceVector& v, int out_w, int out_h) {
  if (v.size() != static_cast<Eigen::Index>(out_w) * out_h) {
    throw Error(ErrorKind::DimensionMismatch, "vector length differs from patch area");
  }
  GrayImage patch(out_w, out_h);
  Eigen::Index k = 0;
  for (int c = 0; c < out_w; ++c) {
    for (int r = 0; r < out_h; ++r) patch(r, c) = v(k++);
  }
  return patch;
}

AppearanceVector appearance(const GrayImage& frame, const MotionState& state, const PatchGeometry& geom) {
  return to_vector(crop_patch(frame, state, geom));
}

AppearanceVector mask_candidate(const AppearanceVector& c, const ObservationMask& omega) {
  if (omega.dim() != c.size()) throw Error(ErrorKind::InvalidMask, "mask dimension differs from candidate length");
  AppearanceVector out = AppearanceVector::Zero(c.size());
  for (int j : omega.indices()) out(j) = c(j);
  return out;
}

}  // namespace mct
