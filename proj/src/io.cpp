#include "mctrack/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <opencv2/imgcodecs.hpp>

#include "json.hpp"
#include "mctrack/error.hpp"

namespace mct {
namespace fs = std::filesystem;

namespace {

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".pgm" || ext == ".ppm" || ext == ".bmp";
}

double parse_number(std::string_view token, const std::string& where) {
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) throw Error(ErrorKind::Parse, where + ": bad number '" + std::string(token) + "'");
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find_first_of(seps, pos);
    const std::size_t stop = next == std::string_view::npos ? line.size() : next;
    if (stop > pos) out.push_back(line.substr(pos, stop - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      std::string_view na(a.data() + i, ie - i), nb(b.data() + j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

GrayImage load_gray(const fs::path& file) {
  const cv::Mat img = cv::imread(file.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) throw Error(ErrorKind::Ingestion, "cannot decode " + file.string());
  cv::Mat u8;
  if (img.depth() == CV_8U) {
    u8 = img;
  } else if (img.depth() == CV_16U) {
    img.convertTo(u8, CV_8U, 1.0 / 257.0);
  } else {
    throw Error(ErrorKind::Ingestion, "unsupported pixel depth in " + file.string());
  }
  const int w = u8.cols, h = u8.rows;
  if (u8.channels() == 1) {
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r) std::copy_n(u8.ptr<std::uint8_t>(r), w, buf.begin() + static_cast<std::ptrdiff_t>(r) * w);
    return gray_from_u8(w, h, buf);
  }
  if (u8.channels() == 3 || u8.channels() == 4) {
    const int ch = u8.channels();
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
    for (int r = 0; r < h; ++r) {
      const std::uint8_t* row = u8.ptr<std::uint8_t>(r);
      for (int c = 0; c < w; ++c) {
        const std::size_t o = (static_cast<std::size_t>(r) * w + c) * 3;
        rgb[o] = row[c * ch + 2];  // OpenCV stores BGR(A)
        rgb[o + 1] = row[c * ch + 1];
        rgb[o + 2] = row[c * ch];
      }
    }
    return gray_from_rgb8(w, h, rgb);
  }
  throw Error(ErrorKind::Ingestion, "unsupported channel count in " + file.string());
}

void save_gray(const fs::path& file, const GrayImage& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC1);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      m.at<std::uint8_t>(r, c) = static_cast<std::uint8_t>(std::lround(std::clamp(img(r, c), 0.0, 1.0) * 255.0));
    }
  }
  if (!cv::imwrite(file.string(), m)) throw Error(ErrorKind::Ingestion, "cannot write " + file.string());
}

LoadedSequence load_sequence(const fs::path& dir) {
  fs::path root = dir;
  if (fs::is_directory(dir / "img")) root = dir / "img";
  if (!fs::is_directory(root)) throw Error(ErrorKind::Ingestion, "not a directory: " + dir.string());

  LoadedSequence seq;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_regular_file() && is_image(entry.path())) seq.source.files.push_back(entry.path());
  }
  if (seq.source.files.empty()) throw Error(ErrorKind::Ingestion, "no image files in " + root.string());
  std::sort(seq.source.files.begin(), seq.source.files.end(), [](const fs::path& a, const fs::path& b) {
    return natural_less(a.filename().string(), b.filename().string());
  });

  for (const auto& file : seq.source.files) {
    GrayImage frame = load_gray(file);
    if (!seq.frames.empty() && (frame.width() != seq.frames[0].width() || frame.height() != seq.frames[0].height())) {
      throw Error(ErrorKind::Ingestion, "frame size differs from the first frame: " + file.string());
    }
    seq.frames.push_back(std::move(frame));
  }
  seq.source.width = seq.frames[0].width();
  seq.source.height = seq.frames[0].height();
  return seq;
}

std::vector<Box> parse_groundtruth(const std::string& text) {
  std::vector<Box> boxes;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const std::string where = "ground truth line " + std::to_string(line_no);
    const auto fields = split_fields(body, ", \t");
    if (fields.size() != 4) throw Error(ErrorKind::Parse, where + ": expected 4 fields");
    Box b{parse_number(fields[0], where), parse_number(fields[1], where), parse_number(fields[2], where),
          parse_number(fields[3], where)};
    if (!(b.w > 0.0) || !(b.h > 0.0)) throw Error(ErrorKind::Parse, where + ": box size must be positive");
    boxes.push_back(b);
  }
  return boxes;
}

std::vector<Box> load_groundtruth(const fs::path& path, std::optional<int> expected_frames) {
  std::vector<Box> boxes = parse_groundtruth(read_text(path));
  if (expected_frames && static_cast<int>(boxes.size()) != *expected_frames) {
    throw Error(ErrorKind::Ingestion, fmt::format("{} has {} boxes for {} frames", path.string(), boxes.size(), *expected_frames));
  }
  return boxes;
}

void save_sequence(const fs::path& dir, const std::vector<GrayImage>& frames, const std::vector<Box>& truth) {
  fs::create_directories(dir / "img");
  for (std::size_t k = 0; k < frames.size(); ++k) save_gray(dir / "img" / fmt::format("{:04d}.png", k + 1), frames[k]);
  std::string gt;
  for (const Box& b : truth) gt += fmt::format("{},{},{},{}\n", format_double(b.x), format_double(b.y), format_double(b.w), format_double(b.h));
  write_text(dir / "groundtruth_rect.txt", gt);
}

std::string format_double(double v) { return fmt::format("{}", v); }

std::vector<BoxRow> to_rows(const std::vector<FrameResult>& results) {
  std::vector<BoxRow> rows;
  rows.reserve(results.size());
  for (std::size_t k = 0; k < results.size(); ++k) {
    const FrameResult& r = results[k];
    rows.push_back({static_cast<int>(k), r.bbox, r.score, r.err, r.iterations});
  }
  return rows;
}

std::string format_boxes_csv(const std::vector<BoxRow>& rows) {
  std::string out = "frame,x,y,w,h,score,err,iterations\n";
  for (const BoxRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.frame, format_double(r.box.x), format_double(r.box.y),
                       format_double(r.box.w), format_double(r.box.h), format_double(r.score), format_double(r.err),
                       r.iterations);
  }
  return out;
}

std::vector<BoxRow> parse_boxes_csv(const std::string& text) {
  std::vector<BoxRow> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || (line_no == 1 && body.starts_with("frame"))) continue;
    const std::string where = "boxes.csv line " + std::to_string(line_no);
    const auto f = split_fields(body, ",");
    if (f.size() != 8) throw Error(ErrorKind::Parse, where + ": expected 8 fields");
    BoxRow r;
    r.frame = static_cast<int>(parse_number(f[0], where));
    r.box = {parse_number(f[1], where), parse_number(f[2], where), parse_number(f[3], where), parse_number(f[4], where)};
    r.score = parse_number(f[5], where);
    r.err = parse_number(f[6], where);
    r.iterations = static_cast<int>(parse_number(f[7], where));
    rows.push_back(r);
  }
  return rows;
}

void write_boxes_csv(const fs::path& path, const std::vector<BoxRow>& rows) { write_text(path, format_boxes_csv(rows)); }

std::vector<BoxRow> read_boxes_csv(const fs::path& path) { return parse_boxes_csv(read_text(path)); }

std::string format_metrics_json(const EvalReport& report) {
  nlohmann::json j;
  j["frames"] = report.tle.size();
  j["mean_tle"] = report.mean_tle;
  j["median_tle"] = report.median_tle;
  j["precision_at_20"] = report.precision;
  j["mean_overlap"] = report.mean_or;
  j["success_at_0.5"] = report.success;
  j["precision_curve"] = {{"thresholds", report.precision_curve.thresholds}, {"values", report.precision_curve.values}};
  j["success_curve"] = {{"thresholds", report.success_curve.thresholds}, {"values", report.success_curve.values}};
  j["tle"] = report.tle;
  j["overlap"] = report.overlap;
  return j.dump(2) + "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Ingestion, "cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Ingestion, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace mct
