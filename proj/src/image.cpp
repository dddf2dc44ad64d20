#include "texturemap/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

namespace texturemap {

namespace {

void check_dims(int width, int height, std::size_t pixel_count, const char* what) {
  if (width < 1 || height < 1) {
    throw InvalidArgument(std::string(what) + ": dimensions must be at least 1x1");
  }
  if (pixel_count != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument(std::string(what) + ": pixel count does not match dimensions");
  }
}

}  // namespace

RgbImage::RgbImage(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width_, height_, pixels_.size(), "RgbImage");
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width_, height_, pixels_.size(), "GrayImage");
}

QuantizedImage::QuantizedImage(int width, int height, int levels, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), levels_(levels), pixels_(std::move(pixels)) {
  check_dims(width_, height_, pixels_.size(), "QuantizedImage");
  if (levels_ < 2 || levels_ > 256) {
    throw InvalidArgument("QuantizedImage: levels must be in 2..256");
  }
  for (std::uint8_t v : pixels_) {
    if (v >= levels_) {
      throw InvalidArgument("QuantizedImage: pixel value exceeds levels-1");
    }
  }
}

LabelRaster::LabelRaster(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width_, height_, pixels_.size(), "LabelRaster");
}

ClassMap::ClassMap(std::vector<std::string> names) : names_(std::move(names)) {
  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) {
      throw InvalidArgument("ClassMap: duplicate class name '" + name + "'");
    }
  }
  if (names_.size() > static_cast<std::size_t>(kUnlabeled)) {
    throw InvalidArgument("ClassMap: class ids must stay below the unlabeled sentinel (255)");
  }
}

ClassMap ClassMap::numbered(int count) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    names.push_back("class_" + std::to_string(i));
  }
  return ClassMap(std::move(names));
}

GrayImage to_grayscale(const RgbImage& img) {
  std::vector<std::uint8_t> out;
  out.reserve(img.pixels().size());
  for (const Rgb& p : img.pixels()) {
    double luma = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
    long v = std::lround(luma);  // lround rounds halves away from zero; luma >= 0 here
    out.push_back(static_cast<std::uint8_t>(std::clamp(v, 0L, 255L)));
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

QuantizedImage quantize(const GrayImage& img, int levels) {
  if (levels < 2 || levels > 256) {
    throw InvalidArgument("quantize: levels must be in 2..256");
  }
  std::vector<std::uint8_t> out;
  out.reserve(img.pixels().size());
  for (std::uint8_t v : img.pixels()) {
    out.push_back(static_cast<std::uint8_t>((v * levels) / 256));
  }
  return QuantizedImage(img.width(), img.height(), levels, std::move(out));
}

std::vector<WindowSpec> tile_windows(const QuantizedImage& img, int size) {
  if (size < 2) {
    throw InvalidArgument("tile_windows: window size must be at least 2");
  }
  std::vector<WindowSpec> windows;
  const int nx = img.width() / size;
  const int ny = img.height() / size;
  if (nx <= 0 || ny <= 0) {
    return windows;
  }
  windows.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int ty = 0; ty < ny; ++ty) {
    for (int tx = 0; tx < nx; ++tx) {
      windows.push_back(WindowSpec{tx * size, ty * size, size});
    }
  }
  return windows;
}

int window_label(const LabelRaster& labels, const WindowSpec& w, double purity) {
  if (purity <= 0.0 || purity > 1.0) {
    throw InvalidArgument("window_label: purity must be in (0,1]");
  }
  if (w.x < 0 || w.y < 0 || w.size < 1 || w.x + w.size > labels.width() ||
      w.y + w.size > labels.height()) {
    throw InvalidArgument("window_label: window lies outside the label raster");
  }
  std::array<std::uint64_t, 256> histogram{};
  for (int y = w.y; y < w.y + w.size; ++y) {
    for (int x = w.x; x < w.x + w.size; ++x) {
      ++histogram[static_cast<std::size_t>(labels.at(x, y))];
    }
  }
  int modal = kUnlabeled;
  std::uint64_t modal_count = 0;
  for (int id = 0; id < kUnlabeled; ++id) {  // smaller id wins ties
    if (histogram[static_cast<std::size_t>(id)] > modal_count) {
      modal = id;
      modal_count = histogram[static_cast<std::size_t>(id)];
    }
  }
  const std::uint64_t total = static_cast<std::uint64_t>(w.size) * static_cast<std::uint64_t>(w.size);
  if (modal == kUnlabeled || static_cast<double>(modal_count) < purity * static_cast<double>(total)) {
    return kUnlabeled;
  }
  return modal;
}

}  // namespace texturemap
