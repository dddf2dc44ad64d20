#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "texturemap/error.hpp"

namespace texturemap {

/// Label raster sentinel for pixels/windows without ground truth.
/// Class ids are therefore restricted to 0..254.
inline constexpr int kUnlabeled = 255;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

/// 8-bit RGB image, row-major, immutable after construction.
class RgbImage {
 public:
  RgbImage(int width, int height, std::vector<Rgb> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  const Rgb& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const Rgb> pixels() const { return pixels_; }

 private:
  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

/// 8-bit grayscale image, row-major, immutable after construction.
class GrayImage {
 public:
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Grayscale image reduced to `levels` discrete bins; pixel values are bin indices.
class QuantizedImage {
 public:
  QuantizedImage(int width, int height, int levels, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  int levels() const { return levels_; }
  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

 private:
  int width_;
  int height_;
  int levels_;
  std::vector<std::uint8_t> pixels_;
};

/// Axis-aligned square region; the unit of feature extraction and classification.
struct WindowSpec {
  int x = 0;
  int y = 0;
  int size = 0;

  bool operator==(const WindowSpec&) const = default;
};

/// Per-pixel ground-truth class ids aligned with the image they annotate.
/// Pixel value kUnlabeled marks missing ground truth.
class LabelRaster {
 public:
  LabelRaster(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  int at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Ordered list of class names; the class id is the index. Ids are dense from
/// zero and names are unique.
class ClassMap {
 public:
  ClassMap() = default;
  explicit ClassMap(std::vector<std::string> names);

  /// Builds a map of `count` classes named "class_0", "class_1", ...
  static ClassMap numbered(int count);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int id) const { return names_[static_cast<std::size_t>(id)]; }
  bool contains(int id) const { return id >= 0 && id < size(); }
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const ClassMap&) const = default;

 private:
  std::vector<std::string> names_;
};

/// BT.601 luma conversion: gray = round(0.299 R + 0.587 G + 0.114 B), half up.
GrayImage to_grayscale(const RgbImage& img);

/// Reduces 0..255 intensities to `levels` bins: bin = floor(value * levels / 256).
/// Monotone in the input value. Throws InvalidArgument unless 2 <= levels <= 256.
QuantizedImage quantize(const GrayImage& img, int levels);

/// Non-overlapping square tiles in row-major order, stride == size. Partial
/// tiles at the right/bottom edges are dropped; a size larger than both image
/// dimensions yields an empty sequence.
std::vector<WindowSpec> tile_windows(const QuantizedImage& img, int size);

/// Ground-truth label for a window: the modal labeled class if its share of
/// the window's pixels reaches `purity`, else kUnlabeled. Modal ties break
/// toward the smaller class id.
int window_label(const LabelRaster& labels, const WindowSpec& w, double purity);

}  // namespace texturemap
