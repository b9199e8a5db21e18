#include "smsp/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "smsp/errors.hpp"
#include "smsp/rng.hpp"

namespace smsp {

int yinyang_label(double x, double y) {
  const auto sq = [](double v) { return v * v; };
  const bool one = sq(x - 0.5) + sq(y) < sq(0.1) ||
                   (x > 0 && y < 0 && sq(x - 0.5) + sq(y) > 0.25) ||
                   (x < 0 && y < 0 && sq(x + 0.5) + sq(y) > sq(0.1)) ||
                   (x < 0 && y > 0 && sq(x + 0.5) + sq(y) < 0.25);
  return one ? 1 : 2;
}

Dataset make_yinyang(int n_raw, std::uint64_t seed) {
  if (n_raw < 1) throw std::invalid_argument("make_yinyang: n_raw must be positive");
  Rng rng(seed);
  std::vector<LabeledPoint> pts;
  pts.reserve(static_cast<std::size_t>(n_raw));
  for (int i = 0; i < n_raw; ++i) {
    const double x = rng.uniform(-1, 1);
    const double y = rng.uniform(-1, 1);
    if (x * x + y * y >= 1) continue;
    pts.push_back({Point(x, y), yinyang_label(x, y)});
  }
  return Dataset::from_points(pts, 2);
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0 && train_fraction < 1)) throw std::invalid_argument("train fraction must lie in (0, 1)");
  const std::size_t n = static_cast<std::size_t>(data.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  const auto n_train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n)));
  std::vector<int> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<int> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {data.subset(train), data.subset(test)};
}

Point ImageGrid::pixel_center(int row, int col) const {
  const double fx = (col + 0.5) / width;
  const double fy = (row + 0.5) / height;
  return {domain.x_min + fx * (domain.x_max - domain.x_min), domain.y_max - fy * (domain.y_max - domain.y_min)};
}

PointSet ImageGrid::centers() const {
  PointSet pts(2, static_cast<Eigen::Index>(width) * height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) pts.col(static_cast<Eigen::Index>(r) * width + c) = pixel_center(r, c);
  }
  return pts;
}

Dataset ImageGrid::to_dataset() const {
  Dataset d;
  d.num_labels = 2;
  d.points = centers();
  d.labels.assign(labels.data(), labels.data() + labels.size());
  return d;
}

double ImageGrid::pixel_diagonal() const {
  const double dx = (domain.x_max - domain.x_min) / width;
  const double dy = (domain.y_max - domain.y_min) / height;
  return std::hypot(dx, dy);
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(const std::string& bytes) : b_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      const char ch = b_[pos_];
      if (ch == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int integer(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long long v = 0;
    while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
      v = v * 10 + (b_[pos_] - '0');
      if (v > 1'000'000'000) throw IoError(std::string("PGM: ") + what + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw IoError(std::string("PGM: expected ") + what, start);
    return static_cast<int>(v);
  }

  std::size_t pos_{0};
  const std::string& b_;
};

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw IoError("PGM: missing P2/P5 magic", 0);
  }
  const bool binary = bytes[1] == '5';
  PgmReader in(bytes);
  in.pos_ = 2;
  GrayImage img;
  img.width = in.integer("width");
  img.height = in.integer("height");
  img.max_value = in.integer("maxval");
  if (img.width < 1 || img.height < 1) throw IoError("PGM: empty image", in.pos_);
  if (img.max_value < 1 || img.max_value > 65535) throw IoError("PGM: maxval out of range", in.pos_);
  const std::size_t count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.pixels.resize(count);

  if (binary) {
    if (in.pos_ >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[in.pos_]))) {
      throw IoError("PGM: expected whitespace before raster", in.pos_);
    }
    ++in.pos_;
    const std::size_t bpp = img.max_value > 255 ? 2 : 1;
    if (bytes.size() - in.pos_ < count * bpp) throw IoError("PGM: truncated raster", bytes.size());
    for (std::size_t i = 0; i < count; ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + in.pos_ + i * bpp);
      img.pixels[i] = bpp == 2 ? (p[0] << 8) | p[1] : p[0];
    }
    in.pos_ += count * bpp;
  } else {
    for (std::size_t i = 0; i < count; ++i) img.pixels[i] = in.integer("pixel value");
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (img.pixels[i] > img.max_value) throw IoError("PGM: pixel exceeds maxval", in.pos_);
  }
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_pgm(ss.str());
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  for (int v : image.pixels) {
    const int scaled = image.max_value == 255 ? v : static_cast<int>(std::lround(255.0 * v / image.max_value));
    f.put(static_cast<char>(static_cast<unsigned char>(scaled)));
  }
  if (!f) throw IoError("write failed for " + path.string());
}

GrayImage downscale_nearest(const GrayImage& image, double fraction) {
  if (!(fraction > 0 && fraction <= 1)) throw std::invalid_argument("downscale fraction must lie in (0, 1]");
  if (fraction == 1) return image;
  GrayImage out;
  out.max_value = image.max_value;
  out.width = std::max(1, static_cast<int>(std::lround(image.width * fraction)));
  out.height = std::max(1, static_cast<int>(std::lround(image.height * fraction)));
  out.pixels.resize(static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height));
  for (int r = 0; r < out.height; ++r) {
    const int sr = std::min(image.height - 1, static_cast<int>((r + 0.5) * image.height / out.height));
    for (int c = 0; c < out.width; ++c) {
      const int sc = std::min(image.width - 1, static_cast<int>((c + 0.5) * image.width / out.width));
      out.pixels[static_cast<std::size_t>(r) * out.width + c] = image.pixels[static_cast<std::size_t>(sr) * image.width + sc];
    }
  }
  return out;
}

ImageGrid binarize(const GrayImage& image, int threshold, bool invert) {
  ImageGrid g;
  g.width = image.width;
  g.height = image.height;
  g.labels.resize(image.height, image.width);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) {
      const int v = image.pixels[static_cast<std::size_t>(r) * image.width + c];
      const double v8 = image.max_value == 255 ? v : 255.0 * v / image.max_value;
      const bool fg = (v8 >= threshold) != invert;
      g.labels(r, c) = fg ? 1 : 2;
    }
  }
  return g;
}

GrayImage render(const ImageGrid& grid) {
  GrayImage img;
  img.width = grid.width;
  img.height = grid.height;
  img.max_value = 255;
  img.pixels.resize(static_cast<std::size_t>(grid.labels.size()));
  for (Eigen::Index i = 0; i < grid.labels.size(); ++i) {
    img.pixels[static_cast<std::size_t>(i)] = grid.labels.data()[i] == 1 ? 255 : 0;
  }
  return img;
}

IngestedImage ingest_image(const std::filesystem::path& path, double downscale, int threshold, bool invert) {
  IngestedImage out;
  out.grid = binarize(downscale_nearest(read_pgm(path), downscale), threshold, invert);
  out.points = out.grid.to_dataset();
  return out;
}

Dataset read_points_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t offset = 0;
  if (!std::getline(f, line)) throw IoError("empty CSV " + path.string(), 0);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,label") throw IoError("CSV header must be x,y,label", 0);
  offset += line.size() + 1;
  std::vector<LabeledPoint> pts;
  int max_label = 2;
  while (std::getline(f, line)) {
    const std::size_t row_offset = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    double x = 0, y = 0;
    int z = 0;
    char c1 = 0, c2 = 0;
    if (!(ss >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',' || z < 1 || !std::isfinite(x) || !std::isfinite(y)) {
      throw IoError("malformed CSV row in " + path.string(), row_offset);
    }
    max_label = std::max(max_label, z);
    pts.push_back({Point(x, y), z});
  }
  return Dataset::from_points(pts, max_label);
}

void write_points_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << "x,y,label\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    f << data.points(0, i) << ',' << data.points(1, i) << ',' << data.label(i) << '\n';
  }
  if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace smsp
