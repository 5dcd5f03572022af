#include "mctrack/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mctrack/error.hpp"

namespace mct {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Smooth random 1-D profile: a couple of sinusoids with random phase.
std::vector<double> random_profile(int length, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::uniform_int_distribution<int> cycles(2, 5);
  const int f1 = cycles(rng);
  const int f2 = cycles(rng) + 1;
  const double p1 = phase(rng);
  const double p2 = phase(rng);
  std::vector<double> v(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    const double t = static_cast<double>(i) / length;
    v[i] = std::sin(kTwoPi * f1 * t + p1) + 0.5 * std::sin(kTwoPi * f2 * t + p2);
  }
  return v;
}

GrayImage background(const SyntheticSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kWaves = 8;
  double fx[kWaves], fy[kWaves], ph[kWaves], amp[kWaves];
  for (int q = 0; q < kWaves; ++q) {
    fx[q] = (unit(rng) - 0.5) * 0.5;
    fy[q] = (unit(rng) - 0.5) * 0.5;
    ph[q] = unit(rng) * kTwoPi;
    amp[q] = 0.5 + unit(rng);
  }
  GrayImage bg(spec.width, spec.height);
  double lo = 1e300, hi = -1e300;
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      double v = 0.0;
      for (int q = 0; q < kWaves; ++q) v += amp[q] * std::sin(fx[q] * c + fy[q] * r + ph[q]);
      bg(r, c) = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  for (double& v : bg.data()) v = 0.1 + 0.8 * (v - lo) / (hi - lo);
  return bg;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (width < 1 || height < 1 || frames < 1) throw Error(ErrorKind::InvalidInput, "synthetic frame size and count must be positive");
  if (target_w < 1 || target_h < 1 || target_w > width || target_h > height) {
    throw Error(ErrorKind::InvalidInput, "target must fit inside the frame");
  }
  if (texture_rank < 0) throw Error(ErrorKind::InvalidInput, "texture rank must be >= 0");
  if (noise_std < 0.0) throw Error(ErrorKind::InvalidInput, "noise std must be >= 0");
  if (!(wobble_period > 0.0)) throw Error(ErrorKind::InvalidInput, "wobble period must be positive");
  for (const auto& o : occluders) {
    if (!(o.coverage >= 0.0 && o.coverage < 1.0)) throw Error(ErrorKind::InvalidInput, "occluder coverage must lie in [0, 1)");
    if (!(o.offset >= 0.0 && o.offset <= 1.0)) throw Error(ErrorKind::InvalidInput, "occluder offset must lie in [0, 1]");
    if (o.start_frame < 0 || o.length < 0 || o.start_frame + o.length > frames) {
      throw Error(ErrorKind::InvalidInput, "occluder schedule out of range");
    }
  }
}

GrayImage target_texture(const SyntheticSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  GrayImage tex(spec.target_w, spec.target_h);
  std::vector<std::vector<double>> rows, cols;
  for (int q = 0; q < spec.texture_rank; ++q) {
    rows.push_back(random_profile(spec.target_h, rng));
    cols.push_back(random_profile(spec.target_w, rng));
  }
  double lo = 0.0, hi = 0.0;
  for (int r = 0; r < spec.target_h; ++r) {
    for (int c = 0; c < spec.target_w; ++c) {
      double v = 0.0;
      for (int q = 0; q < spec.texture_rank; ++q) v += rows[q][r] * cols[q][c] / (q + 1);
      tex(r, c) = v;
      if (r == 0 && c == 0) lo = hi = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  for (double& v : tex.data()) v = hi > lo ? 0.15 + 0.7 * (v - lo) / (hi - lo) : 0.5;
  return tex;
}

Box target_box(const SyntheticSpec& spec, int k) {
  const double phase = kTwoPi * k / spec.wobble_period;
  double x = spec.start_x + spec.velocity_x * k + spec.wobble_amplitude * std::sin(phase);
  double y = spec.start_y + spec.velocity_y * k + 0.5 * spec.wobble_amplitude * (1.0 - std::cos(phase));
  x = std::clamp(std::round(x), 0.0, static_cast<double>(spec.width - spec.target_w));
  y = std::clamp(std::round(y), 0.0, static_cast<double>(spec.height - spec.target_h));
  return {x, y, static_cast<double>(spec.target_w), static_cast<double>(spec.target_h)};
}

SyntheticSequence generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const GrayImage tex = target_texture(spec);
  std::mt19937_64 scene_rng(spec.seed ^ 0x5bd1e995ULL);
  const GrayImage bg = background(spec, scene_rng);
  std::mt19937_64 noise_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> noise(0.0, 1.0);

  SyntheticSequence seq;
  for (int k = 0; k < spec.frames; ++k) {
    const double gain = 1.0 + spec.illumination * k / spec.frames;
    const Box box = target_box(spec, k);
    const int left = static_cast<int>(box.x);
    const int top = static_cast<int>(box.y);

    GrayImage frame = bg;
    for (int r = 0; r < spec.target_h; ++r) {
      for (int c = 0; c < spec.target_w; ++c) frame(top + r, left + c) = tex(r, c);
    }
    for (double& v : frame.data()) v = std::clamp(v * gain, 0.0, 1.0);

    for (const auto& occ : spec.occluders) {
      if (k < occ.start_frame || k >= occ.start_frame + occ.length) continue;
      const int rows = static_cast<int>(std::lround(occ.coverage * spec.target_h));
      const int first = std::min(static_cast<int>(std::lround(occ.offset * spec.target_h)), spec.target_h - rows);
      for (int r = first; r < first + rows; ++r) {
        for (int c = 0; c < spec.target_w; ++c) {
          const double stripe = std::sin(kTwoPi * (r + c) / 6.0);
          frame(top + r, left + c) = std::clamp(occ.intensity + occ.contrast * stripe, 0.0, 1.0);
        }
      }
    }
    if (spec.noise_std > 0.0) {
      for (double& v : frame.data()) v = std::clamp(v + spec.noise_std * noise(noise_rng), 0.0, 1.0);
    }
    seq.frames.push_back(std::move(frame));
    seq.truth.push_back(box);
  }
  return seq;
}

SyntheticSpec demo_spec() {
  SyntheticSpec spec;
  spec.illumination = 0.2;
  spec.noise_std = 0.02;
  spec.occluders.push_back({40, 10, 0.3, 0.35, 0.5, 0.3});
  return spec;
}

}  // namespace mct
