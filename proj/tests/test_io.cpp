#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mctrack/app.hpp"
#include "mctrack/config.hpp"
#include "mctrack/error.hpp"
#include "mctrack/io.hpp"
#include "mctrack/synthetic.hpp"

using namespace mct;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(MCT_TEST_BIN_DIR) / "scratch" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Binary PGM written by hand.
void write_pgm(const fs::path& file, int w, int h, std::uint8_t base) {
  std::ofstream out(file, std::ios::binary);
  out << "P5\n" << w << " " << h << "\n255\n";
  for (int i = 0; i < w * h; ++i) out.put(static_cast<char>(base + i % 7));
}

const char* kSmallConfig = R"({
  "num_candidates": 40,
  "synth_frames": 6,
  "synth_occluders": [],
  "seed": 3
})";

}  // namespace

TEST_CASE("load_sequence reads PGM frames") {
  const fs::path dir = scratch("pgm");
  for (int k = 0; k < 3; ++k) write_pgm(dir / ("f" + std::to_string(k) + ".pgm"), 9, 6, 100);
  const LoadedSequence seq = load_sequence(dir);
  REQUIRE(seq.frames.size() == 3);
  CHECK(seq.source.width == 9);
  CHECK(seq.source.height == 6);
  CHECK(seq.frames[0](0, 1) == doctest::Approx(101.0 / 255.0));
  CHECK(seq.frames[1] == seq.frames[0]);
  CHECK(seq.frames[2] == seq.frames[0]);
}

TEST_CASE("load_sequence rejects mixed sizes naming the file") {
  const fs::path dir = scratch("mixed");
  write_pgm(dir / "a1.pgm", 9, 6, 0);
  write_pgm(dir / "a2.pgm", 8, 6, 0);
  try {
    load_sequence(dir);
    FAIL("expected an ingestion error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Ingestion);
    CHECK(std::string(e.what()).find("a2.pgm") != std::string::npos);
  }
  CHECK_THROWS_AS(load_sequence(dir / "missing"), Error);
}

TEST_CASE("OTB layout loads frames in numeric order") {
  const fs::path dir = scratch("otb");
  fs::create_directories(dir / "img");
  // Frame k has first pixel k; names sort wrongly as plain strings.
  for (int k : {1, 2, 10, 11}) write_pgm(dir / "img" / (std::to_string(k) + ".pgm"), 4, 4, static_cast<std::uint8_t>(k));
  const LoadedSequence seq = load_sequence(dir);
  REQUIRE(seq.frames.size() == 4);
  const int expect[] = {1, 2, 10, 11};
  for (int i = 0; i < 4; ++i) CHECK(seq.frames[i](0, 0) * 255.0 == doctest::Approx(expect[i]));

  std::vector<std::string> names{"img10.jpg", "img2.jpg", "img1.jpg", "0003.jpg", "0001.jpg"};
  std::sort(names.begin(), names.end(), natural_less);
  CHECK(names == std::vector<std::string>{"0001.jpg", "0003.jpg", "img1.jpg", "img2.jpg", "img10.jpg"});
}

TEST_CASE("ground truth parsing") {
  CHECK(parse_groundtruth("10,20,30,40\n") == std::vector<Box>{{10, 20, 30, 40}});
  CHECK(parse_groundtruth("10\t20\t30\t40\r\n") == std::vector<Box>{{10, 20, 30, 40}});
  CHECK(parse_groundtruth("1 2 3 4\n\n5,6,7,8") == std::vector<Box>{{1, 2, 3, 4}, {5, 6, 7, 8}});
  try {
    parse_groundtruth("1,2,3,4\n5,6,x,8\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_groundtruth("1,2,3\n"), Error);
  CHECK_THROWS_AS(parse_groundtruth("1,2,0,4\n"), Error);

  const fs::path dir = scratch("gt");
  write_text(dir / "gt.txt", "1,2,3,4\n5,6,7,8\n");
  CHECK(load_groundtruth(dir / "gt.txt", 2).size() == 2);
  CHECK_THROWS_AS(load_groundtruth(dir / "gt.txt", 3), Error);
}

TEST_CASE("boxes.csv round trip is exact") {
  std::vector<BoxRow> rows{{0, {56, 40, 32, 32}, 1.0, 0.0, 0},
                           {1, {56.123456789012345, 40.1, 32.064, 31.99}, std::exp(-0.3), 0.3, 17},
                           {2, {1e-7, 3.0 / 7.0, 1.0 / 3.0, 2.0 / 3.0}, 0.123, 2.5e-12, 100}};
  const std::string csv = format_boxes_csv(rows);
  CHECK(csv.starts_with("frame,x,y,w,h,score,err,iterations\n"));
  const auto back = parse_boxes_csv(csv);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].frame == rows[i].frame);
    CHECK(back[i].box == rows[i].box);
    CHECK(back[i].score == rows[i].score);
    CHECK(back[i].err == rows[i].err);
    CHECK(back[i].iterations == rows[i].iterations);
  }
  CHECK(format_boxes_csv(back) == csv);
  CHECK_THROWS_AS(parse_boxes_csv("frame,x\n1,2,3\n"), Error);
}

TEST_CASE("config parsing") {
  const RunConfig def = parse_config("{}");
  CHECK(def.tracker.num_candidates == 600);
  CHECK(def.tracker.obs_rate == 0.7);
  CHECK(def.tracker.n_templates == 10);
  CHECK(def.tracker.sigma.s == 0.005);
  CHECK(!def.tracker.solver.mu0.has_value());

  const RunConfig c = parse_config(R"({"obs_rate": 0.5, "mu0": 2.5, "synth_occluders": [{"start": 1, "length": 2, "coverage": 0.2}]})");
  CHECK(c.tracker.obs_rate == 0.5);
  CHECK(c.tracker.solver.mu0 == 2.5);
  REQUIRE(c.synthetic.occluders.size() == 1);
  CHECK(c.synthetic.occluders[0].coverage == 0.2);

  CHECK_THROWS_AS(parse_config(R"({"obs_rte": 0.5})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"obs_rate": "high"})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"obs_rate": 1.5})"), Error);
  CHECK_THROWS_AS(parse_config("[1, 2]"), Error);
  CHECK_THROWS_AS(parse_config("{"), Error);

  // dump/parse round trip.
  const RunConfig again = parse_config(dump_config(c));
  CHECK(dump_config(again) == dump_config(c));
}

TEST_CASE("parse_rate_list") {
  CHECK(parse_rate_list("0.3,0.5,0.7,0.9") == std::vector<double>{0.3, 0.5, 0.7, 0.9});
  CHECK_THROWS_AS(parse_rate_list("0.3,,0.5"), Error);
  CHECK_THROWS_AS(parse_rate_list("0.3,abc"), Error);
  CHECK_THROWS_AS(parse_rate_list("1.5"), Error);
}

TEST_CASE("track then eval agree; reruns are byte-identical") {
  const fs::path dir = scratch("app");
  write_text(dir / "cfg.json", kSmallConfig);
  AppOptions opts;
  opts.config = dir / "cfg.json";
  opts.out = dir / "run1";
  const TrackOutcome outcome = run_track(opts);
  CHECK(outcome.rows.size() == 6);
  REQUIRE(outcome.report.has_value());
  const std::string metrics = read_text(opts.out / "metrics.json");
  const std::string csv = read_text(opts.out / "boxes.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  const EvalReport again = run_eval(opts);
  CHECK(again.tle == outcome.report->tle);
  CHECK(again.overlap == outcome.report->overlap);
  CHECK(read_text(opts.out / "metrics.json") == metrics);

  AppOptions rerun = opts;
  rerun.out = dir / "run2";
  run_track(rerun);
  CHECK(read_text(rerun.out / "boxes.csv") == csv);
  CHECK(read_text(rerun.out / "metrics.json") == metrics);

  AppOptions overlay = opts;
  overlay.out = dir / "run3";
  overlay.overlay = true;
  run_track(overlay);
  CHECK(read_text(overlay.out / "boxes.csv") == csv);
  CHECK(fs::exists(overlay.out / "overlay" / "000005.png"));
  CHECK(fs::exists(overlay.out / "mask" / "000000.png"));
  CHECK(fs::exists(overlay.out / "mask" / "000003.txt"));
  CHECK(fs::exists(overlay.out / "templates.png"));
}

TEST_CASE("synth output feeds track through the OTB loader") {
  const fs::path dir = scratch("synth");
  write_text(dir / "cfg.json", kSmallConfig);
  AppOptions synth;
  synth.config = dir / "cfg.json";
  synth.out = dir / "seq";
  run_synth(synth);
  CHECK(fs::exists(dir / "seq" / "img" / "0001.png"));
  CHECK(fs::exists(dir / "seq" / "img" / "0006.png"));

  AppOptions track;
  track.config = dir / "cfg.json";
  track.seq = dir / "seq";
  track.gt = dir / "seq" / "groundtruth_rect.txt";
  track.out = dir / "out";
  const TrackOutcome t = run_track(track);
  CHECK(t.rows.size() == 6);
  CHECK(t.report.has_value());
}

TEST_CASE("conflicting flags are usage errors") {
  const fs::path dir = scratch("usage");
  write_text(dir / "cfg.json", kSmallConfig);
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidInput;
  };
  AppOptions a;
  a.config = dir / "cfg.json";
  a.out = dir / "o";
  a.sweep_rates = {0.5};
  CHECK(kind_of([&] { run_track(a); }) == ErrorKind::Usage);
  AppOptions b = a;
  b.sweep_rates.clear();
  CHECK(kind_of([&] { run_sweep(b); }) == ErrorKind::Usage);
  b.overlay = true;
  CHECK(kind_of([&] { run_eval(b); }) == ErrorKind::Usage);
  AppOptions c;
  c.config = dir / "cfg.json";
  c.seq = dir;
  CHECK(kind_of([&] { run_track(c); }) == ErrorKind::Usage);
}

TEST_CASE("sweep writes one row per rate") {
  const fs::path dir = scratch("sweep");
  write_text(dir / "cfg.json", kSmallConfig);
  AppOptions opts;
  opts.config = dir / "cfg.json";
  opts.out = dir / "out";
  opts.sweep_rates = {0.3, 0.7};
  const auto rows = run_sweep(opts);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].obs_rate == 0.7);
  const std::string text = read_text(opts.out / "sweep.csv");
  CHECK(text.starts_with("obs_rate,mean_tle,mean_or\n0.3,"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
