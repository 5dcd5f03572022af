#include "mctrack/render.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "mctrack/error.hpp"

namespace mct {
namespace {

constexpr int kZoom = 8;

std::uint8_t to_u8(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

cv::Mat to_bgr(const GrayImage& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const std::uint8_t g = to_u8(img(r, c));
      m.at<cv::Vec3b>(r, c) = {g, g, g};
    }
  }
  return m;
}

void write(const std::filesystem::path& file, const cv::Mat& m) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  if (!cv::imwrite(file.string(), m)) throw Error(ErrorKind::Ingestion, "cannot write " + file.string());
}

cv::Rect to_rect(const Box& b) {
  return {static_cast<int>(std::lround(b.x)), static_cast<int>(std::lround(b.y)), static_cast<int>(std::lround(b.w)),
          static_cast<int>(std::lround(b.h))};
}

}  // namespace

void write_overlay(const std::filesystem::path& file, const GrayImage& frame, const Box& tracked, std::optional<Box> truth) {
  cv::Mat m = to_bgr(frame);
  if (truth) cv::rectangle(m, to_rect(*truth), cv::Scalar(0, 200, 0), 1);
  cv::rectangle(m, to_rect(tracked), cv::Scalar(0, 0, 255), 1);
  write(file, m);
}

void write_mask_view(const std::filesystem::path& file, const AppearanceVector& target, const ObservationMask& omega,
                     int patch_w, int patch_h) {
  const GrayImage patch = unstack(target, patch_w, patch_h);
  const auto observed = omega.membership();
  cv::Mat m(patch_h * kZoom, patch_w * kZoom, CV_8UC3);
  for (int r = 0; r < patch_h; ++r) {
    for (int c = 0; c < patch_w; ++c) {
      const std::uint8_t g = to_u8(patch(r, c));
      // Column-major index, matching the appearance vector layout.
      const bool seen = observed[static_cast<std::size_t>(c) * patch_h + r] != 0;
      const cv::Vec3b color = seen ? cv::Vec3b{g, g, g} : cv::Vec3b{255, static_cast<std::uint8_t>(g / 3), static_cast<std::uint8_t>(g / 3)};
      m(cv::Rect(c * kZoom, r * kZoom, kZoom, kZoom)).setTo(cv::Scalar(color[0], color[1], color[2]));
    }
  }
  write(file, m);
}

void write_template_montage(const std::filesystem::path& file, const TemplateSet& ts, int patch_w, int patch_h) {
  const int tile_w = patch_w * 4;
  const int tile_h = patch_h * 4;
  cv::Mat m(tile_h, tile_w * ts.count(), CV_8UC3, cv::Scalar(0, 0, 0));
  for (int i = 0; i < ts.count(); ++i) {
    const GrayImage patch = unstack(ts.t.col(i), patch_w, patch_h);
    cv::Mat tile;
    cv::resize(to_bgr(patch), tile, cv::Size(tile_w, tile_h), 0, 0, cv::INTER_NEAREST);
    tile.copyTo(m(cv::Rect(i * tile_w, 0, tile_w, tile_h)));
  }
  write(file, m);
}

}  // namespace mct
