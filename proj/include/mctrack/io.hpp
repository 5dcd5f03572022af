#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mctrack/appearance.hpp"
#include "mctrack/eval.hpp"
#include "mctrack/tracker.hpp"

namespace mct {

struct SequenceSource {
  enum class Kind { ImageDirectory, Synthetic };
  Kind kind = Kind::ImageDirectory;
  std::vector<std::filesystem::path> files;
  int width = 0;
  int height = 0;
  int frame_count() const noexcept { return static_cast<int>(files.size()); }
};

struct LoadedSequence {
  SequenceSource source;
  std::vector<GrayImage> frames;
};

/// Decodes PNG/JPEG/PGM/PPM/BMP frames from a directory (or its `img/`
/// subdirectory, OTB layout) in natural filename order.
LoadedSequence load_sequence(const std::filesystem::path& dir);

/// Decodes one image file to gray; color images use ITU-R 601 luma.
GrayImage load_gray(const std::filesystem::path& file);
void save_gray(const std::filesystem::path& file, const GrayImage& img);

/// Natural ordering: digit runs compare numerically.
bool natural_less(const std::string& a, const std::string& b);

/// One "x,y,w,h" line per frame; comma, tab or space separated.
std::vector<Box> parse_groundtruth(const std::string& text);
std::vector<Box> load_groundtruth(const std::filesystem::path& path, std::optional<int> expected_frames = {});

/// Writes frames as img/0001.png ... plus groundtruth_rect.txt.
void save_sequence(const std::filesystem::path& dir, const std::vector<GrayImage>& frames, const std::vector<Box>& truth);

struct BoxRow {
  int frame = 0;
  Box box;
  double score = 0.0;
  double err = 0.0;
  int iterations = 0;
};

std::vector<BoxRow> to_rows(const std::vector<FrameResult>& results);
std::string format_boxes_csv(const std::vector<BoxRow>& rows);
std::vector<BoxRow> parse_boxes_csv(const std::string& text);
void write_boxes_csv(const std::filesystem::path& path, const std::vector<BoxRow>& rows);
std::vector<BoxRow> read_boxes_csv(const std::filesystem::path& path);

std::string format_metrics_json(const EvalReport& report);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace mct
