#pragma once

// Synthetic sequences with exact ground truth: a low-rank textured target
// moving over a cluttered background, under an illumination ramp, optional
// occluders and Gaussian pixel noise.

#include <cstdint>
#include <vector>

#include "mctrack/appearance.hpp"

namespace mct {

struct OccluderEvent {
  int start_frame = 0;
  int length = 0;
  /// Fraction of the target box rows covered.
  double coverage = 0.0;
  /// First covered row, as a fraction of the box height.
  double offset = 0.0;
  double intensity = 0.5;
  /// Amplitude of diagonal stripes (period 6 px) around `intensity`.
  double contrast = 0.0;
};

struct SyntheticSpec {
  int width = 160;
  int height = 120;
  int frames = 100;
  int target_w = 32;
  int target_h = 32;
  /// Rank of the target texture around its mean level.
  int texture_rank = 3;
  /// Top-left of the target at frame 0.
  double start_x = 56.0;
  double start_y = 40.0;
  double velocity_x = 0.3;
  double velocity_y = 0.15;
  double wobble_amplitude = 8.0;
  double wobble_period = 60.0;
  /// Frame k is scaled by (1 + illumination * k / frames).
  double illumination = 0.0;
  std::vector<OccluderEvent> occluders;
  double noise_std = 0.0;
  std::uint64_t seed = 7;

  void validate() const;
};

struct SyntheticSequence {
  std::vector<GrayImage> frames;
  std::vector<Box> truth;
};

/// Target texture before lighting, target_h x target_w, values in [0.15, 0.85].
GrayImage target_texture(const SyntheticSpec& spec);

/// Integer top-left corner of the target at frame k.
Box target_box(const SyntheticSpec& spec, int k);

SyntheticSequence generate_synthetic(const SyntheticSpec& spec);

/// The occluded-illumination demo sequence used by the harness.
SyntheticSpec demo_spec();

}  // namespace mct
