#include <random>

#include <Eigen/QR>

#include "doctest.h"
#include "mctrack/error.hpp"
#include "mctrack/templates.hpp"

using namespace mct;

namespace {

Vector random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = g(rng);
  return v.normalized();
}

TemplateSet random_set(int d, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TemplateSet ts;
  ts.t.resize(d, n);
  for (int i = 0; i < n; ++i) ts.t.col(i) = random_unit(d, rng);
  ts.weights = Vector::Constant(n, 1.0 / n);
  return ts;
}

}  // namespace

TEST_CASE("seed_offsets ring order") {
  const auto o = seed_offsets(10);
  REQUIRE(o.size() == 10);
  CHECK(o[0] == std::pair{1, 0});
  CHECK(o[3] == std::pair{0, -1});
  CHECK(o[7] == std::pair{-1, -1});
  CHECK(o[8] == std::pair{1, 0});
  CHECK(seed_offsets(0).empty());
}

TEST_CASE("init_templates") {
  const PatchGeometry geom;
  SUBCASE("constant frame gives identical columns") {
    const GrayImage frame(60, 60, 0.4);
    const MotionState s{30, 30, 1};
    const TemplateSet ts = init_templates(appearance(frame, s, geom), frame, s, geom, 10);
    CHECK(ts.count() == 10);
    CHECK(ts.dim() == 400);
    for (int i = 0; i < 10; ++i) CHECK(ts.t.col(i).isApprox(ts.t.col(0)));
    CHECK(ts.weights.isApprox(Vector::Constant(10, 0.1)));
  }
  SUBCASE("n = 1 is just the first target") {
    GrayImage frame(60, 60);
    for (int r = 0; r < 60; ++r) {
      for (int c = 0; c < 60; ++c) frame(r, c) = (r * 7 + c * 3) % 11 / 10.0;
    }
    const MotionState s{30, 30, 1};
    const AppearanceVector y1 = appearance(frame, s, geom);
    const TemplateSet ts = init_templates(y1, frame, s, geom, 1);
    CHECK(ts.count() == 1);
    CHECK(ts.t.col(0) == y1);
    CHECK(ts.weights(0) == 1.0);
  }
  SUBCASE("vertical edge moves by one column in the (+1, 0) template") {
    GrayImage frame(60, 40);
    for (int r = 0; r < 40; ++r) {
      for (int c = 30; c < 60; ++c) frame(r, c) = 1.0;
    }
    const MotionState s{30, 20, 1};  // crop columns 20..39, edge at patch column 10
    const TemplateSet ts = init_templates(appearance(frame, s, geom), frame, s, geom, 2);
    const GrayImage p0 = unstack(ts.t.col(0), 20, 20);
    const GrayImage p1 = unstack(ts.t.col(1), 20, 20);
    for (int r = 0; r < 20; ++r) {
      CHECK(p0(r, 9) == 0.0);
      CHECK(p0(r, 10) == 1.0);
      CHECK(p1(r, 8) == 0.0);
      CHECK(p1(r, 9) == 1.0);
    }
  }
  SUBCASE("bad arguments") {
    const GrayImage frame(60, 60, 0.4);
    const AppearanceVector y1 = AppearanceVector::Zero(400);
    CHECK_THROWS_AS(init_templates(y1, frame, {30, 30, 1}, geom, 0), Error);
    CHECK_THROWS_AS(init_templates(y1, frame, {30, 30, 0}, geom, 3), Error);
  }
}

TEST_CASE("update_templates: similar target keeps the columns") {
  const TemplateSet ts = random_set(50, 6, 1);
  const TemplateSet out = update_templates(ts, 2.0 * ts.t.col(3));
  CHECK(out.t == ts.t);
  CHECK(out.weights.sum() == doctest::Approx(6.0));
  // The matching template gains the most weight.
  Eigen::Index top = 0;
  out.weights.maxCoeff(&top);
  CHECK(top == 3);
}

TEST_CASE("update_templates: a dissimilar target replaces the weakest column") {
  TemplateSet ts = random_set(50, 5, 2);
  ts.weights << 1.2, 0.9, 0.4, 1.1, 1.4;
  // Orthogonal to every column.
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(ts.t).householderQ();
  const Vector y = q.col(7);
  const TemplateSet out = update_templates(ts, y);
  CHECK(out.t.col(2) == y);
  for (int i : {0, 1, 3, 4}) CHECK(out.t.col(i) == ts.t.col(i));
  // The replaced column gets the median weight scaled by exp(alpha); the
  // others exp(0) before renormalization.
  Vector expect(5);
  expect << 1.2, 0.9, 1.1 * std::exp(0.2), 1.1, 1.4;
  expect *= 5.0 / expect.sum();
  CHECK(out.weights.isApprox(expect, 1e-12));
}

TEST_CASE("update_templates: successive far targets replace distinct columns") {
  TemplateSet ts = random_set(80, 6, 3);
  std::mt19937_64 rng(3);
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(ts.t).householderQ();
  std::vector<int> replaced;
  for (int step = 0; step < 3; ++step) {
    const TemplateSet next = update_templates(ts, q.col(10 + step));
    int changed = 0;
    for (int i = 0; i < ts.count(); ++i) {
      if (next.t.col(i) != ts.t.col(i)) {
        ++changed;
        replaced.push_back(i);
      }
    }
    CHECK(changed == 1);
    CHECK(next.count() == ts.count());
    ts = next;
  }
  std::sort(replaced.begin(), replaced.end());
  CHECK(std::adjacent_find(replaced.begin(), replaced.end()) == replaced.end());
}

TEST_CASE("update_templates: count is constant and at most one column changes") {
  std::mt19937_64 rng(4);
  TemplateSet ts = random_set(30, 8, 4);
  for (int step = 0; step < 100; ++step) {
    Vector y = ts.t.col(step % 8) + 0.8 * random_unit(30, rng);
    const TemplateSet next = update_templates(ts, y);
    CHECK(next.count() == 8);
    int changed = 0;
    for (int i = 0; i < 8; ++i) changed += next.t.col(i) != ts.t.col(i);
    CHECK(changed <= 1);
    CHECK((next.weights.array() > 0).all());
    CHECK(next.weights.mean() == doctest::Approx(1.0));
    ts = next;
  }
  CHECK_THROWS_AS(update_templates(ts, Vector::Zero(29)), Error);
}

TEST_CASE("assemble") {
  TemplateSet ts;
  ts.t = Matrix::Constant(3, 2, 0.5);
  ts.weights = Vector::Constant(2, 0.5);
  AppearanceVector c(3);
  c << 0.1, 0.2, 0.3;
  const ObservationMask omega({0}, 3);
  const CompletionProblem p = assemble(ts, c, omega);
  CHECK(p.y().rows() == 3);
  CHECK(p.y().cols() == 3);
  CHECK(p.observed().count() == 7);
  CHECK(p.y().leftCols(2) == ts.t);
  CHECK(p.y()(0, 2) == 0.1);
  CHECK(!p.observed()(1, 2));

  const CompletionProblem full = assemble(ts, c, ObservationMask::all(3));
  CHECK(full.observed().all());
  CHECK(full.y().col(2) == c);
  CHECK_THROWS_AS(assemble(ts, c, ObservationMask({0}, 4)), Error);
}
