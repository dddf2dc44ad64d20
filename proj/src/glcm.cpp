#include "texturemap/glcm.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>
#include <utility>

namespace texturemap {

Direction direction_from_degrees(int degrees) {
  switch (degrees) {
    case 0:
      return Direction::deg0;
    case 45:
      return Direction::deg45;
    case 90:
      return Direction::deg90;
    case 135:
      return Direction::deg135;
    default:
      throw InvalidArgument("direction must be one of 0, 45, 90, 135");
  }
}

int to_degrees(Direction dir) {
  switch (dir) {
    case Direction::deg0:
      return 0;
    case Direction::deg45:
      return 45;
    case Direction::deg90:
      return 90;
    default:
      return 135;
  }
}

std::pair<int, int> direction_step(Direction dir) {
  switch (dir) {
    case Direction::deg0:
      return {1, 0};
    case Direction::deg45:
      return {1, -1};
    case Direction::deg90:
      return {0, -1};
    default:
      return {-1, -1};
  }
}

Glcm::Glcm(int levels, std::vector<std::uint64_t> counts, OffsetSpec offset)
    : levels_(levels), counts_(std::move(counts)), offset_(offset) {
  if (levels_ < 2 || levels_ > 256) {
    throw InvalidArgument("Glcm: levels must be in 2..256");
  }
  if (counts_.size() != static_cast<std::size_t>(levels_) * static_cast<std::size_t>(levels_)) {
    throw InvalidArgument("Glcm: counts size does not match levels");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

NormalizedGlcm::NormalizedGlcm(int levels, std::vector<double> p, OffsetSpec offset)
    : levels_(levels), p_(std::move(p)), offset_(offset) {
  if (p_.size() != static_cast<std::size_t>(levels_) * static_cast<std::size_t>(levels_)) {
    throw InvalidArgument("NormalizedGlcm: cell count does not match levels");
  }
}

Glcm compute_glcm(const QuantizedImage& img, const WindowSpec& w, const OffsetSpec& off) {
  if (off.distance < 1) {
    throw InvalidArgument("compute_glcm: offset distance must be at least 1");
  }
  if (w.x < 0 || w.y < 0 || w.size < 2 || w.x + w.size > img.width() ||
      w.y + w.size > img.height()) {
    throw InvalidArgument("compute_glcm: window lies outside the image");
  }

  const int levels = img.levels();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(levels) * levels, 0);

  static constexpr std::array<Direction, 4> kAllDirections = {
      Direction::deg0, Direction::deg45, Direction::deg90, Direction::deg135};
  const std::span<const Direction> dirs =
      off.average_directions ? std::span<const Direction>(kAllDirections)
                             : std::span<const Direction>(&off.direction, 1);

  for (Direction dir : dirs) {
    const auto [sx, sy] = direction_step(dir);
    const int dx = sx * off.distance;
    const int dy = sy * off.distance;
    // Clip the source range so that both the pixel and its partner stay in the window.
    const int x_lo = w.x + std::max(0, -dx);
    const int x_hi = w.x + w.size - std::max(0, dx);
    const int y_lo = w.y + std::max(0, -dy);
    const int y_hi = w.y + w.size - std::max(0, dy);
    for (int y = y_lo; y < y_hi; ++y) {
      for (int x = x_lo; x < x_hi; ++x) {
        const int a = img.at(x, y);
        const int b = img.at(x + dx, y + dy);
        ++counts[static_cast<std::size_t>(a) * levels + b];
      }
    }
  }

  if (off.symmetric) {
    for (int i = 0; i < levels; ++i) {
      for (int j = i + 1; j < levels; ++j) {
        const std::size_t ij = static_cast<std::size_t>(i) * levels + j;
        const std::size_t ji = static_cast<std::size_t>(j) * levels + i;
        const std::uint64_t sum = counts[ij] + counts[ji];
        counts[ij] = sum;
        counts[ji] = sum;
      }
      counts[static_cast<std::size_t>(i) * levels + i] *= 2;
    }
  }

  Glcm g(levels, std::move(counts), off);
  if (g.total() == 0) {
    throw InvalidArgument("compute_glcm: window too small for the offset");
  }
  return g;
}

NormalizedGlcm normalize(const Glcm& g) {
  if (g.total() == 0) {
    throw ComputeError("normalize: co-occurrence matrix has zero total count");
  }
  const double total = static_cast<double>(g.total());
  std::vector<double> p;
  p.reserve(g.counts().size());
  for (std::uint64_t c : g.counts()) {
    p.push_back(static_cast<double>(c) / total);
  }
  return NormalizedGlcm(g.levels(), std::move(p), g.offset());
}

double homogeneity(const NormalizedGlcm& p) {
  const int levels = p.levels();
  double sum = 0.0;
  for (int i = 0; i < levels; ++i) {
    for (int j = 0; j < levels; ++j) {
      const double d = static_cast<double>(i - j);
      sum += p.at(i, j) / (1.0 + d * d);
    }
  }
  return sum;
}

double contrast(const NormalizedGlcm& p) {
  const int levels = p.levels();
  double sum = 0.0;
  for (int i = 0; i < levels; ++i) {
    for (int j = 0; j < levels; ++j) {
      const double d = static_cast<double>(i - j);
      sum += d * d * p.at(i, j);
    }
  }
  return sum;
}

double energy(const NormalizedGlcm& p) {
  double sum = 0.0;
  for (double v : p.probabilities()) {
    sum += v * v;
  }
  return sum;
}

double entropy(const NormalizedGlcm& p) {
  double sum = 0.0;
  for (double v : p.probabilities()) {
    if (v > 0.0) {
      sum -= v * std::log(v);
    }
  }
  return sum;
}

FeatureVector extract_features(const QuantizedImage& img, const WindowSpec& w,
                               const OffsetSpec& off) {
  const NormalizedGlcm p = normalize(compute_glcm(img, w, off));
  return FeatureVector{homogeneity(p), contrast(p), energy(p), entropy(p)};
}

std::vector<FeatureVector> extract_features_batch(const QuantizedImage& img,
                                                  std::span<const WindowSpec> windows,
                                                  const OffsetSpec& off, int threads) {
  if (threads < 1) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
  }
  std::vector<FeatureVector> results(windows.size());
  if (windows.empty()) {
    return results;
  }
  const int workers = std::min<int>(threads, static_cast<int>(windows.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < windows.size(); ++i) {
      results[i] = extract_features(img, windows[i], off);
    }
    return results;
  }

  // Static partition by index: each worker owns a disjoint slice, so the
  // result vector is filled identically for any worker count.
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::size_t per_worker = (windows.size() + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    const std::size_t begin = static_cast<std::size_t>(t) * per_worker;
    const std::size_t end = std::min(windows.size(), begin + per_worker);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end]() {
      try {
        for (std::size_t i = begin; i < end; ++i) {
          results[i] = extract_features(img, windows[i], off);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace texturemap
