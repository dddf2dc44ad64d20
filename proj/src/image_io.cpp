#include "texturemap/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace texturemap {

namespace {

static_assert(sizeof(Rgb) == 3, "Rgb must be tightly packed for row-based PNG I/O");

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open file: " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("cannot read file: " + path.string());
  }
  return bytes;
}

// ---------------------------------------------------------------------------
// PNM (P5 grayscale / P6 RGB, binary, maxval 255)
// ---------------------------------------------------------------------------

class PnmParser {
 public:
  PnmParser(const std::vector<std::uint8_t>& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  DecodedImage decode() {
    const bool color = bytes_[1] == '6';
    pos_ = 2;
    const long width = next_int();
    const long height = next_int();
    const long maxval = next_int();
    if (width < 1 || height < 1) {
      throw DataError("invalid PNM dimensions in " + name_);
    }
    if (maxval != 255) {
      throw FormatError("only maxval 255 PNM files are supported: " + name_);
    }
    // Exactly one whitespace byte separates the header from the raster.
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw DataError("malformed PNM header in " + name_);
    }
    ++pos_;
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t payload = color ? n * 3 : n;
    if (bytes_.size() - pos_ < payload) {
      throw DataError("truncated PNM data in " + name_);
    }
    if (color) {
      std::vector<Rgb> pixels(n);
      std::memcpy(pixels.data(), bytes_.data() + pos_, payload);
      return RgbImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
    }
    std::vector<std::uint8_t> pixels(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                     bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + payload));
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
  }

 private:
  long next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw DataError("malformed PNM header in " + name_);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) {
        throw DataError("PNM header value out of range in " + name_);
      }
      ++pos_;
    }
    return value;
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// PNG via libpng
// ---------------------------------------------------------------------------

struct PngMemoryReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

extern "C" void png_memory_read(png_structp png, png_bytep out, png_size_t n) {
  auto* reader = static_cast<PngMemoryReader*>(png_get_io_ptr(png));
  if (reader->pos + n > reader->size) {
    png_error(png, "unexpected end of PNG stream");
  }
  std::memcpy(out, reader->data + reader->pos, n);
  reader->pos += n;
}

extern "C" void png_silent_warning(png_structp, png_const_charp) {}

DecodedImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) {
    throw Error("libpng initialization failed");
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("libpng initialization failed");
  }
  png_set_error_fn(png, png_get_error_ptr(png), nullptr, png_silent_warning);

  PngMemoryReader reader{bytes.data(), bytes.size(), 0};
  png_set_read_fn(png, &reader, png_memory_read);

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("corrupt PNG data: " + name);
  }

  // Normalize to 8-bit gray or RGB: expand palettes and sub-byte depths,
  // reduce 16-bit channels, drop alpha.
  png_read_png(png, info,
               PNG_TRANSFORM_STRIP_16 | PNG_TRANSFORM_STRIP_ALPHA | PNG_TRANSFORM_PACKING |
                   PNG_TRANSFORM_EXPAND,
               nullptr);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  png_bytepp rows = png_get_rows(png, info);

  if (bit_depth != 8 || (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("unsupported PNG layout (expect 8-bit gray or RGB): " + name);
  }

  DecodedImage result = GrayImage(1, 1, {0});
  if (color_type == PNG_COLOR_TYPE_GRAY) {
    std::vector<std::uint8_t> pixels;
    pixels.reserve(static_cast<std::size_t>(width) * height);
    for (png_uint_32 y = 0; y < height; ++y) {
      pixels.insert(pixels.end(), rows[y], rows[y] + width);
    }
    result = GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
  } else {
    std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height);
    for (png_uint_32 y = 0; y < height; ++y) {
      std::memcpy(pixels.data() + static_cast<std::size_t>(y) * width, rows[y],
                  static_cast<std::size_t>(width) * 3);
    }
    result = RgbImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return result;
}

struct FileHandle {
  explicit FileHandle(std::FILE* f) : fp(f) {}
  ~FileHandle() {
    if (fp) std::fclose(fp);
  }
  FileHandle(const FileHandle&) = delete;
  FileHandle& operator=(const FileHandle&) = delete;
  std::FILE* fp;
};

void write_png(const std::filesystem::path& path, int width, int height, int color_type,
               const std::uint8_t* data, std::size_t row_bytes) {
  FileHandle file(std::fopen(path.string().c_str(), "wb"));
  if (!file.fp) {
    throw IoError("cannot open file for writing: " + path.string());
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) {
    throw Error("libpng initialization failed");
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng initialization failed");
  }
  png_set_error_fn(png, png_get_error_ptr(png), nullptr, png_silent_warning);

  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] =
        const_cast<png_bytep>(data + static_cast<std::size_t>(y) * row_bytes);
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to write PNG: " + path.string());
  }

  png_init_io(png, file.fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
}

bool has_png_signature(const std::vector<std::uint8_t>& bytes) {
  static constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSignature, 8) == 0;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

DecodedImage load_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  if (has_png_signature(bytes)) {
    return decode_png(bytes, path.string());
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '5' || bytes[1] == '6') {
      return PnmParser(bytes, path.string()).decode();
    }
    if (bytes[1] >= '1' && bytes[1] <= '7') {
      throw FormatError("unsupported PNM flavor (only binary P5/P6): " + path.string());
    }
  }
  throw FormatError("unsupported image format: " + path.string());
}

GrayImage load_gray(const std::filesystem::path& path) {
  DecodedImage img = load_image(path);
  if (auto* gray = std::get_if<GrayImage>(&img)) {
    return std::move(*gray);
  }
  return to_grayscale(std::get<RgbImage>(img));
}

LabelRaster load_label_raster(const std::filesystem::path& path) {
  DecodedImage img = load_image(path);
  auto* gray = std::get_if<GrayImage>(&img);
  if (!gray) {
    throw FormatError("label raster must be single-channel gray: " + path.string());
  }
  std::vector<std::uint8_t> pixels(gray->pixels().begin(), gray->pixels().end());
  return LabelRaster(gray->width(), gray->height(), std::move(pixels));
}

ClassMap load_class_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open class map: " + path.string());
  }
  std::vector<std::pair<int, std::string>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos) {
      throw DataError("class map line " + std::to_string(line_no) + " is not 'id,name': " +
                      path.string());
    }
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(text.substr(0, comma), &used);
      if (used != trim(text.substr(0, comma)).size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw DataError("class map line " + std::to_string(line_no) + " has a bad id: " +
                      path.string());
    }
    const std::string name = trim(text.substr(comma + 1));
    if (name.empty()) {
      throw DataError("class map line " + std::to_string(line_no) + " has an empty name: " +
                      path.string());
    }
    entries.emplace_back(id, name);
  }
  std::vector<std::string> names(entries.size());
  std::vector<bool> seen(entries.size(), false);
  for (const auto& [id, name] : entries) {
    if (id < 0 || static_cast<std::size_t>(id) >= entries.size() ||
        seen[static_cast<std::size_t>(id)]) {
      throw DataError("class map ids must be dense from 0 with no repeats: " + path.string());
    }
    seen[static_cast<std::size_t>(id)] = true;
    names[static_cast<std::size_t>(id)] = name;
  }
  if (entries.empty()) {
    throw DataError("class map is empty: " + path.string());
  }
  return ClassMap(std::move(names));
}

void save_png(const std::filesystem::path& path, const GrayImage& img) {
  write_png(path, img.width(), img.height(), PNG_COLOR_TYPE_GRAY, img.pixels().data(),
            static_cast<std::size_t>(img.width()));
}

void save_png(const std::filesystem::path& path, const RgbImage& img) {
  write_png(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB,
            reinterpret_cast<const std::uint8_t*>(img.pixels().data()),
            static_cast<std::size_t>(img.width()) * 3);
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open file for writing: " + path.string());
  }
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()),
            static_cast<std::streamsize>(img.pixels().size()));
  if (!out) {
    throw IoError("failed to write PGM: " + path.string());
  }
}

}  // namespace texturemap
