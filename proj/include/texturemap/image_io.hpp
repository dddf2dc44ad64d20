#pragma once

#include <filesystem>
#include <variant>

#include "texturemap/image.hpp"

namespace texturemap {

/// A decoded image is grayscale or RGB depending on the file contents.
using DecodedImage = std::variant<GrayImage, RgbImage>;

/// Decodes a PNG (8-bit gray or RGB; palette images are expanded, 16-bit
/// depths reduced, alpha dropped) or a binary PGM/PPM (P5/P6, maxval 255).
/// Throws IoError when the file cannot be read, FormatError for an
/// unsupported format, DataError for truncated or inconsistent contents.
DecodedImage load_image(const std::filesystem::path& path);

/// load_image followed by to_grayscale when the file decodes to RGB.
GrayImage load_gray(const std::filesystem::path& path);

/// Loads an 8-bit single-channel PNG/PGM whose pixel values are class ids
/// (255 = unlabeled). RGB files are rejected.
LabelRaster load_label_raster(const std::filesystem::path& path);

/// Parses a class map file: one `id,name` per line, ids dense from 0,
/// blank lines and lines starting with '#' ignored.
ClassMap load_class_map(const std::filesystem::path& path);

void save_png(const std::filesystem::path& path, const GrayImage& img);
void save_png(const std::filesystem::path& path, const RgbImage& img);
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

}  // namespace texturemap
