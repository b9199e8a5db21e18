#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "smsp/dataset.hpp"

namespace smsp {

/// Yin-yang labeling of a point in the unit disk (1 or 2).
int yinyang_label(double x, double y);

/// n_raw uniform draws on [-1, 1]^2, points outside the unit disk dropped.
Dataset make_yinyang(int n_raw, std::uint64_t seed);

/// Uniform random partition; the training part has ceil(f * n) items.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed);

struct Rect {
  double x_min{-0.5}, x_max{0.5}, y_min{-0.5}, y_max{0.5};
};

/// Row-major label image mapped onto a rectangle; row 0 is the top row.
struct ImageGrid {
  using Labels = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  int width{0};
  int height{0};
  Labels labels;
  Rect domain;

  Point pixel_center(int row, int col) const;
  /// Pixel-center points, row-major order.
  PointSet centers() const;
  Dataset to_dataset() const;
  /// Diagonal pixel spacing, sqrt(1/W^2 + 1/H^2) for the unit domain.
  double pixel_diagonal() const;
};

/// 8- or 16-bit grayscale raster as read from a PGM file.
struct GrayImage {
  int width{0};
  int height{0};
  int max_value{255};
  std::vector<int> pixels;
};

GrayImage read_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes);
/// Binary (P5) 8-bit writer.
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Nearest-neighbor resampling to round(fraction * size) pixels per axis.
GrayImage downscale_nearest(const GrayImage& image, double fraction);

/// Foreground (label 1) where the value, rescaled to 0..255, is >= threshold;
/// `invert` swaps foreground and background.
ImageGrid binarize(const GrayImage& image, int threshold = 128, bool invert = false);

/// Label 1 pixels become 255, everything else 0.
GrayImage render(const ImageGrid& grid);

struct IngestedImage {
  ImageGrid grid;
  Dataset points;
};

IngestedImage ingest_image(const std::filesystem::path& path, double downscale = 1.0, int threshold = 128,
                           bool invert = false);

/// Point CSV with header `x,y,label`.
Dataset read_points_csv(const std::filesystem::path& path);
void write_points_csv(const std::filesystem::path& path, const Dataset& data);

}  // namespace smsp
