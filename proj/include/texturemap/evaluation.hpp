#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "texturemap/classifiers.hpp"
#include "texturemap/glcm.hpp"
#include "texturemap/image.hpp"

namespace texturemap {

/// K×K class-count table; rows index the true class, columns the predicted
/// class. Accuracy is trace/total.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(ClassMap classes);

  const ClassMap& classes() const { return classes_; }
  int size() const { return classes_.size(); }

  std::uint64_t at(int truth, int pred) const;
  void record(int truth, int pred);
  void merge(const ConfusionMatrix& other);

  std::uint64_t total() const;
  std::uint64_t trace() const;
  double accuracy() const;

  /// Diagonal over column / row sums; 0 when the class never appears.
  double precision(int c) const;
  double recall(int c) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  ClassMap classes_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> pred,
                                 const ClassMap& classes);

/// Stratified fold assignment: per class, samples are shuffled under the
/// seed and dealt round-robin, so per-fold class counts differ by at most 1.
struct FoldPlan {
  int k = 0;
  std::uint32_t seed = 0;
  std::vector<int> assignment;  // fold index per sample

  bool operator==(const FoldPlan&) const = default;
};

FoldPlan kfold_split(const TrainingSet& data, int k, std::uint32_t seed);

struct ClassifierSpec {
  enum class Kind { naive_bayes, svm };

  Kind kind = Kind::naive_bayes;
  SvmParams svm;  // consulted only when kind == svm
};

struct CvResult {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  bool svm_converged = true;  // false if any fold's SVM hit its sweep cap
};

/// k-fold cross-validation: train on k-1 folds, score the held-out fold,
/// aggregate one confusion matrix over all held-out predictions.
CvResult cross_validate(const TrainingSet& data, const ClassifierSpec& spec, int k,
                        std::uint32_t seed);

/// Renders prediction quality over the grayscale base: misclassified windows
/// get a half-opacity red fill and a 1-pixel solid red border, correct
/// windows a 15%-opacity green fill; windows with unlabeled truth and pixels
/// outside all windows keep the base value.
RgbImage misclassification_map(const GrayImage& img, std::span<const WindowSpec> windows,
                               std::span<const int> truths, std::span<const int> preds);

struct BenchRow {
  int size = 0;
  std::int64_t windows = 0;
  double seconds = 0.0;           // median wall time over the repeats
  double features_per_sec = 0.0;  // windows * feature count / seconds
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

/// Times (tile -> extract features for every window) `repeats` times per
/// size and reports the median. Runs strictly serially. A size exceeding
/// the image yields a row with zero windows and zero time.
BenchReport benchmark_runtime(const QuantizedImage& img, std::span<const int> sizes,
                              int repeats, const OffsetSpec& off);

/// Machine-readable report: `accuracy,<a>`, one `class,<id>,<precision>,
/// <recall>,<name>` line per class, one `confusion,<id>,<counts...>` line
/// per true class. Contains no timestamps, so equal results serialize
/// byte-identically.
void write_evaluation_report(std::ostream& out, const CvResult& result);

/// Human-readable multi-line summary of the same numbers.
std::string format_evaluation_summary(const CvResult& result);

/// Header line `size,windows,seconds,features_per_sec`, then one row per
/// benchmarked size.
void write_bench_report(std::ostream& out, const BenchReport& report);

}  // namespace texturemap
