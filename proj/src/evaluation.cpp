#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "texturemap/error.hpp"
#include "texturemap/evaluation.hpp"

namespace texturemap {

namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(ClassMap classes) : classes_(std::move(classes)) {
  if (classes_.size() < 1) {
    throw InvalidArgument("ConfusionMatrix: need at least one class");
  }
  counts_.assign(static_cast<std::size_t>(classes_.size()) * classes_.size(), 0);
}

std::uint64_t ConfusionMatrix::at(int truth, int pred) const {
  if (!classes_.contains(truth) || !classes_.contains(pred)) {
    throw InvalidArgument("ConfusionMatrix: class id out of range");
  }
  return counts_[static_cast<std::size_t>(truth) * classes_.size() + pred];
}

void ConfusionMatrix::record(int truth, int pred) {
  if (!classes_.contains(truth) || !classes_.contains(pred)) {
    throw InvalidArgument("ConfusionMatrix: class id out of range");
  }
  ++counts_[static_cast<std::size_t>(truth) * classes_.size() + pred];
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.classes_ != classes_) {
    throw InvalidArgument("ConfusionMatrix: cannot merge over different class maps");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (int c = 0; c < size(); ++c) {
    t += counts_[static_cast<std::size_t>(c) * size() + c];
  }
  return t;
}

double ConfusionMatrix::accuracy() const {
  const std::uint64_t n = total();
  if (n == 0) throw ComputeError("accuracy of an empty confusion matrix");
  return static_cast<double>(trace()) / static_cast<double>(n);
}

double ConfusionMatrix::precision(int c) const {
  std::uint64_t col = 0;
  for (int t = 0; t < size(); ++t) col += at(t, c);
  return col == 0 ? 0.0 : static_cast<double>(at(c, c)) / static_cast<double>(col);
}

double ConfusionMatrix::recall(int c) const {
  std::uint64_t row = 0;
  for (int p = 0; p < size(); ++p) row += at(c, p);
  return row == 0 ? 0.0 : static_cast<double>(at(c, c)) / static_cast<double>(row);
}

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> pred,
                                 const ClassMap& classes) {
  if (truth.size() != pred.size()) {
    throw InvalidArgument("confusion_matrix: truth and prediction lengths differ");
  }
  ConfusionMatrix m(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    m.record(truth[i], pred[i]);
  }
  return m;
}

FoldPlan kfold_split(const TrainingSet& data, int k, std::uint32_t seed) {
  if (k < 2) throw InvalidArgument("kfold_split: k must be at least 2");
  const std::vector<std::size_t> counts = data.validated_class_counts();
  for (int c = 0; c < data.classes.size(); ++c) {
    if (counts[static_cast<std::size_t>(c)] < static_cast<std::size_t>(k)) {
      throw InvalidArgument("kfold_split: class `" + data.classes.name(c) + "` has only " +
                            std::to_string(counts[static_cast<std::size_t>(c)]) +
                            " samples, fewer than k=" + std::to_string(k));
    }
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(data.samples.size(), 0);

  std::mt19937 rng(seed);
  for (int c = 0; c < data.classes.size(); ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
      if (data.samples[i].label == c) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t p = 0; p < members.size(); ++p) {
      plan.assignment[members[p]] = static_cast<int>(p % static_cast<std::size_t>(k));
    }
  }
  return plan;
}

CvResult cross_validate(const TrainingSet& data, const ClassifierSpec& spec, int k,
                        std::uint32_t seed) {
  const FoldPlan plan = kfold_split(data, k, seed);

  CvResult result;
  result.confusion = ConfusionMatrix(data.classes);

  for (int fold = 0; fold < k; ++fold) {
    TrainingSet train;
    train.classes = data.classes;
    std::vector<std::size_t> held_out;
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
      if (plan.assignment[i] == fold) {
        held_out.push_back(i);
      } else {
        train.samples.push_back(data.samples[i]);
      }
    }

    if (spec.kind == ClassifierSpec::Kind::svm) {
      const SvmModel model = svm_fit(train, spec.svm);
      result.svm_converged = result.svm_converged && model.all_converged();
      for (std::size_t i : held_out) {
        result.confusion.record(data.samples[i].label, svm_predict(model, data.samples[i].features));
      }
    } else {
      const NbModel model = nb_fit(train);
      for (std::size_t i : held_out) {
        result.confusion.record(data.samples[i].label,
                                nb_predict(model, data.samples[i].features).label);
      }
    }
  }

  result.accuracy = result.confusion.accuracy();
  return result;
}

namespace {

Rgb blend(std::uint8_t base, const Rgb& tint, double alpha) {
  const auto mix = [&](std::uint8_t t) {
    return static_cast<std::uint8_t>(
        std::lround((1.0 - alpha) * base + alpha * static_cast<double>(t)));
  };
  return Rgb{mix(tint.r), mix(tint.g), mix(tint.b)};
}

}  // namespace

RgbImage misclassification_map(const GrayImage& img, std::span<const WindowSpec> windows,
                               std::span<const int> truths, std::span<const int> preds) {
  if (windows.size() != truths.size() || windows.size() != preds.size()) {
    throw InvalidArgument("misclassification_map: windows, truths, preds lengths differ");
  }
  for (const WindowSpec& w : windows) {
    if (w.size < 1 || w.x < 0 || w.y < 0 || w.x + w.size > img.width() ||
        w.y + w.size > img.height()) {
      throw InvalidArgument("misclassification_map: window outside the image");
    }
  }

  std::vector<Rgb> pixels(static_cast<std::size_t>(img.width()) * img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::uint8_t v = img.at(x, y);
      pixels[static_cast<std::size_t>(y) * img.width() + x] = Rgb{v, v, v};
    }
  }

  constexpr Rgb kRed{255, 0, 0};
  constexpr Rgb kGreen{0, 255, 0};
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (truths[i] == kUnlabeled) continue;
    const WindowSpec& w = windows[i];
    const bool wrong = truths[i] != preds[i];
    for (int y = w.y; y < w.y + w.size; ++y) {
      for (int x = w.x; x < w.x + w.size; ++x) {
        Rgb& px = pixels[static_cast<std::size_t>(y) * img.width() + x];
        if (wrong) {
          const bool border =
              x == w.x || x == w.x + w.size - 1 || y == w.y || y == w.y + w.size - 1;
          px = border ? kRed : blend(img.at(x, y), kRed, 0.5);
        } else {
          px = blend(img.at(x, y), kGreen, 0.15);
        }
      }
    }
  }
  return RgbImage(img.width(), img.height(), std::move(pixels));
}

BenchReport benchmark_runtime(const QuantizedImage& img, std::span<const int> sizes,
                              int repeats, const OffsetSpec& off) {
  if (repeats < 1) throw InvalidArgument("benchmark_runtime: repeats must be at least 1");

  volatile double sink = 0.0;
  BenchReport report;
  for (int size : sizes) {
    if (size < 2) {
      throw InvalidArgument("benchmark_runtime: window size must be at least 2");
    }
    if (img.width() / size == 0 || img.height() / size == 0) {
      // Size exceeds the image: report an empty row rather than failing.
      report.rows.push_back(BenchRow{size, 0, 0.0, 0.0});
      continue;
    }
    std::vector<double> seconds(static_cast<std::size_t>(repeats));
    std::size_t window_count = 0;
    for (int r = 0; r < repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const std::vector<WindowSpec> windows = tile_windows(img, size);
      const std::vector<FeatureVector> features = extract_features_batch(img, windows, off, 1);
      const auto stop = std::chrono::steady_clock::now();
      seconds[static_cast<std::size_t>(r)] = std::chrono::duration<double>(stop - start).count();
      window_count = windows.size();
      double checksum = 0.0;
      for (const FeatureVector& f : features) checksum += f.entropy;
      sink = sink + checksum;
    }

    std::sort(seconds.begin(), seconds.end());
    const std::size_t mid = seconds.size() / 2;
    const double median = seconds.size() % 2 == 1
                              ? seconds[mid]
                              : 0.5 * (seconds[mid - 1] + seconds[mid]);

    BenchRow row;
    row.size = size;
    row.windows = static_cast<std::int64_t>(window_count);
    row.seconds = median;
    row.features_per_sec =
        median > 0.0 ? static_cast<double>(window_count) * kFeatureCount / median : 0.0;
    report.rows.push_back(row);
  }
  return report;
}

void write_evaluation_report(std::ostream& out, const CvResult& result) {
  const ConfusionMatrix& m = result.confusion;
  out << "accuracy," << format_real(result.accuracy) << '\n';
  for (int c = 0; c < m.size(); ++c) {
    out << "class," << c << ',' << format_real(m.precision(c)) << ','
        << format_real(m.recall(c)) << ',' << m.classes().name(c) << '\n';
  }
  for (int t = 0; t < m.size(); ++t) {
    out << "confusion," << t;
    for (int p = 0; p < m.size(); ++p) out << ',' << m.at(t, p);
    out << '\n';
  }
}

std::string format_evaluation_summary(const CvResult& result) {
  const ConfusionMatrix& m = result.confusion;
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "accuracy: %.4f (%llu/%llu windows)",
                result.accuracy, static_cast<unsigned long long>(m.trace()),
                static_cast<unsigned long long>(m.total()));
  out << buf << '\n';
  for (int c = 0; c < m.size(); ++c) {
    std::snprintf(buf, sizeof(buf), "  %-16s precision %.4f  recall %.4f",
                  m.classes().name(c).c_str(), m.precision(c), m.recall(c));
    out << buf << '\n';
  }
  out << "confusion matrix (rows truth, columns prediction):\n";
  for (int t = 0; t < m.size(); ++t) {
    out << "  " << m.classes().name(t) << ':';
    for (int p = 0; p < m.size(); ++p) out << ' ' << m.at(t, p);
    out << '\n';
  }
  if (!result.svm_converged) {
    out << "warning: SMO hit its sweep cap in at least one fold; results use the"
           " best iterate\n";
  }
  return out.str();
}

void write_bench_report(std::ostream& out, const BenchReport& report) {
  out << "size,windows,seconds,features_per_sec\n";
  for (const BenchRow& row : report.rows) {
    out << row.size << ',' << row.windows << ',' << format_real(row.seconds) << ','
        << format_real(row.features_per_sec) << '\n';
  }
}

}  // namespace texturemap
