#include "doctest.h"
#include "mctrack/error.hpp"
#include "mctrack/synthetic.hpp"

using namespace mct;

TEST_CASE("static noiseless sequence repeats one frame") {
  SyntheticSpec spec;
  spec.frames = 5;
  spec.velocity_x = spec.velocity_y = 0.0;
  spec.wobble_amplitude = 0.0;
  const SyntheticSequence seq = generate_synthetic(spec);
  REQUIRE(seq.frames.size() == 5);
  for (const auto& f : seq.frames) CHECK(f == seq.frames[0]);
  for (const auto& b : seq.truth) CHECK(b == seq.truth[0]);
}

TEST_CASE("occluder covers the scheduled share of the box") {
  SyntheticSpec spec;
  spec.frames = 20;
  spec.occluders.push_back({10, 1, 0.3, 0.35, 0.0, 0.0});
  spec.occluders[0].intensity = 0.0;  // black, never produced by the texture
  const SyntheticSequence seq = generate_synthetic(spec);
  const Box b = seq.truth[10];
  int painted = 0;
  for (int r = 0; r < spec.target_h; ++r) {
    for (int c = 0; c < spec.target_w; ++c) painted += seq.frames[10](static_cast<int>(b.y) + r, static_cast<int>(b.x) + c) == 0.0;
  }
  const int area = spec.target_w * spec.target_h;
  CHECK(std::abs(painted - 0.3 * area) <= spec.target_w);

  const Box b9 = seq.truth[9];
  int before = 0;
  for (int r = 0; r < spec.target_h; ++r) {
    for (int c = 0; c < spec.target_w; ++c) before += seq.frames[9](static_cast<int>(b9.y) + r, static_cast<int>(b9.x) + c) == 0.0;
  }
  CHECK(before == 0);
}

TEST_CASE("illumination ramp scales the target") {
  SyntheticSpec spec;
  spec.frames = 40;
  spec.illumination = 0.2;
  const GrayImage tex = target_texture(spec);
  const SyntheticSequence seq = generate_synthetic(spec);
  for (int k : {0, 13, 39}) {
    const Box b = seq.truth[k];
    const double gain = 1.0 + 0.2 * k / 40.0;
    for (int r = 0; r < spec.target_h; r += 5) {
      for (int c = 0; c < spec.target_w; c += 5) {
        CHECK(seq.frames[k](static_cast<int>(b.y) + r, static_cast<int>(b.x) + c) ==
              doctest::Approx(std::clamp(tex(r, c) * gain, 0.0, 1.0)).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("generator is deterministic under its seed") {
  const SyntheticSpec spec = demo_spec();
  const SyntheticSequence a = generate_synthetic(spec);
  const SyntheticSequence b = generate_synthetic(spec);
  CHECK(a.frames == b.frames);
  CHECK(a.truth == b.truth);
  SyntheticSpec other = spec;
  other.seed = 8;
  CHECK(generate_synthetic(other).frames[0] != a.frames[0]);
  for (const Box& box : a.truth) {
    CHECK(box.x >= 0);
    CHECK(box.y >= 0);
    CHECK(box.x + box.w <= spec.width);
    CHECK(box.y + box.h <= spec.height);
  }
}

TEST_CASE("spec validation") {
  SyntheticSpec spec;
  spec.occluders.push_back({95, 10, 0.3, 0.0, 0.5, 0.0});
  CHECK_THROWS_AS(generate_synthetic(spec), Error);
  spec.occluders = {{10, 5, 1.0, 0.0, 0.5, 0.0}};
  CHECK_THROWS_AS(generate_synthetic(spec), Error);
  spec.occluders.clear();
  spec.target_w = 500;
  CHECK_THROWS_AS(generate_synthetic(spec), Error);
}
