#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "texturemap/image.hpp"

namespace texturemap {

/// Canonical co-occurrence directions. With y growing downward, the unit
/// steps are 0 -> (1,0), 45 -> (1,-1), 90 -> (0,-1), 135 -> (-1,-1).
enum class Direction { deg0, deg45, deg90, deg135 };

/// Maps 0/45/90/135 to the enum. Throws InvalidArgument otherwise.
Direction direction_from_degrees(int degrees);
int to_degrees(Direction dir);

/// Pixel step (dx, dy) for one unit of distance along `dir`.
std::pair<int, int> direction_step(Direction dir);

/// Which pixel pairs are counted: distance, direction, and the two
/// accumulation flags. With average_directions set, counts from all four
/// canonical directions are accumulated (the direction field is ignored);
/// symmetrization, if requested, happens after that accumulation.
struct OffsetSpec {
  int distance = 1;
  Direction direction = Direction::deg0;
  bool symmetric = true;
  bool average_directions = false;

  bool operator==(const OffsetSpec&) const = default;
};

/// Raw co-occurrence counts for one window under one OffsetSpec.
class Glcm {
 public:
  Glcm(int levels, std::vector<std::uint64_t> counts, OffsetSpec offset);

  int levels() const { return levels_; }
  const OffsetSpec& offset() const { return offset_; }
  std::uint64_t count(int i, int j) const {
    return counts_[static_cast<std::size_t>(i) * levels_ + j];
  }
  std::uint64_t total() const { return total_; }
  std::span<const std::uint64_t> counts() const { return counts_; }

 private:
  int levels_;
  std::vector<std::uint64_t> counts_;
  OffsetSpec offset_;
  std::uint64_t total_;
};

/// Co-occurrence probabilities: counts divided by their total, summing to 1.
class NormalizedGlcm {
 public:
  NormalizedGlcm(int levels, std::vector<double> p, OffsetSpec offset);

  int levels() const { return levels_; }
  const OffsetSpec& offset() const { return offset_; }
  double at(int i, int j) const { return p_[static_cast<std::size_t>(i) * levels_ + j]; }
  std::span<const double> probabilities() const { return p_; }

 private:
  int levels_;
  std::vector<double> p_;
  OffsetSpec offset_;
};

inline constexpr int kFeatureCount = 4;
inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "homogeneity", "contrast", "energy", "entropy"};

/// The four texture statistics of one window, in the frozen order
/// (homogeneity, contrast, energy, entropy). Entropy is in nats.
struct FeatureVector {
  double homogeneity = 0.0;
  double contrast = 0.0;
  double energy = 0.0;
  double entropy = 0.0;

  std::array<double, kFeatureCount> values() const {
    return {homogeneity, contrast, energy, entropy};
  }
  static FeatureVector from_values(const std::array<double, kFeatureCount>& v) {
    return FeatureVector{v[0], v[1], v[2], v[3]};
  }

  bool operator==(const FeatureVector&) const = default;
};

/// Counts ordered pixel pairs (p, p+step) inside the window. Throws
/// InvalidArgument if the window lies outside the image or admits no pair at
/// the given offset.
Glcm compute_glcm(const QuantizedImage& img, const WindowSpec& w, const OffsetSpec& off);

/// Divides counts by their total. Throws ComputeError on a zero total.
NormalizedGlcm normalize(const Glcm& g);

/// Inverse difference moment: sum of p(i,j) / (1 + (i-j)^2). In (0,1]; 1 iff
/// all mass lies on the diagonal.
double homogeneity(const NormalizedGlcm& p);

/// Sum of (i-j)^2 * p(i,j). In [0, (G-1)^2]; 0 iff all mass on the diagonal.
double contrast(const NormalizedGlcm& p);

/// Angular second moment: sum of p(i,j)^2. In (0,1]; 1 iff a single cell
/// holds all mass.
double energy(const NormalizedGlcm& p);

/// Joint entropy -sum p(i,j) ln p(i,j) in nats, with 0 ln 0 := 0.
/// In [0, 2 ln G].
double entropy(const NormalizedGlcm& p);

/// compute_glcm -> normalize -> the four features.
FeatureVector extract_features(const QuantizedImage& img, const WindowSpec& w,
                               const OffsetSpec& off);

/// Extracts features for every window, optionally across `threads` workers.
/// Results are positionally identical to the serial path regardless of the
/// worker count. threads < 1 selects the machine's hardware concurrency.
std::vector<FeatureVector> extract_features_batch(const QuantizedImage& img,
                                                  std::span<const WindowSpec> windows,
                                                  const OffsetSpec& off, int threads = 1);

}  // namespace texturemap
