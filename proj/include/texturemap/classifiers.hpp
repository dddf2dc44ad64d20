#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "texturemap/glcm.hpp"
#include "texturemap/image.hpp"

namespace texturemap {

struct LabeledSample {
  FeatureVector features;
  int label = 0;
};

/// Training data plus the class vocabulary. Valid sets have at least two
/// classes and at least one sample for every class in the map.
struct TrainingSet {
  std::vector<LabeledSample> samples;
  ClassMap classes;

  /// Per-class sample counts; throws InvalidArgument when the invariants
  /// above fail or a sample's label is not in the map.
  std::vector<std::size_t> validated_class_counts() const;
};

// ---------------------------------------------------------------------------
// Gaussian Naive Bayes
// ---------------------------------------------------------------------------

struct NbClassStats {
  double prior = 0.0;
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> variance{};
};

struct NbModel {
  ClassMap classes;
  std::vector<NbClassStats> per_class;
};

struct Prediction {
  int label = 0;
  std::vector<double> scores;  // one per class, same scale as the decision rule
};

/// Fits per-class priors and per-feature Gaussian moments (population
/// variance, floored at eps*global_variance + delta with eps=1e-9,
/// delta=1e-12 so log-densities stay finite).
NbModel nb_fit(const TrainingSet& data);

/// Log-posterior scores ln prior(c) + sum_f ln N(x_f | mu, sigma^2); argmax
/// with ties toward the smaller class id.
Prediction nb_predict(const NbModel& model, const FeatureVector& x);

// ---------------------------------------------------------------------------
// Feature standardization (SVM input conditioning)
// ---------------------------------------------------------------------------

class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::array<double, kFeatureCount> mean, std::array<double, kFeatureCount> stddev);

  const std::array<double, kFeatureCount>& mean() const { return mean_; }
  const std::array<double, kFeatureCount>& stddev() const { return stddev_; }
  std::array<double, kFeatureCount> apply(const std::array<double, kFeatureCount>& x) const;

 private:
  std::array<double, kFeatureCount> mean_{};
  std::array<double, kFeatureCount> stddev_{1.0, 1.0, 1.0, 1.0};
};

/// Per-feature mean and population standard deviation of the training data,
/// with the deviation floored at 1e-12.
Standardizer standardize_fit(const TrainingSet& data);
FeatureVector standardize_apply(const Standardizer& s, const FeatureVector& x);

// ---------------------------------------------------------------------------
// Soft-margin kernel SVM, SMO-trained, one-vs-rest
// ---------------------------------------------------------------------------

enum class KernelType { linear, rbf };

struct KernelSpec {
  KernelType type = KernelType::rbf;
  double gamma = 0.25;  // RBF width; ignored for the linear kernel

  bool operator==(const KernelSpec&) const = default;
};

struct SvmParams {
  double C = 1.0;
  KernelType kernel = KernelType::rbf;
  double gamma = 0.0;   // <= 0 selects 1/(k*Var) on standardized features
  double tol = 1e-3;    // KKT tolerance
  int max_passes = 100; // stall limit; total sweeps capped at 10x this
  std::uint32_t seed = 42;  // SMO working-pair randomization
};

/// One retained training sample of a binary problem: coefficient alpha*y and
/// the standardized feature vector.
struct SupportVector {
  double coef = 0.0;
  std::array<double, kFeatureCount> z{};
};

/// The solved one-vs-rest subproblem for a single class.
struct BinaryProblem {
  double C = 1.0;
  double bias = 0.0;
  std::vector<SupportVector> support;
  bool converged = true;
};

struct SvmModel {
  Standardizer standardizer;
  KernelSpec kernel;
  ClassMap classes;
  std::vector<BinaryProblem> problems;  // one per class id

  bool all_converged() const;
};

double kernel_value(const KernelSpec& k, const std::array<double, kFeatureCount>& a,
                    const std::array<double, kFeatureCount>& b);

/// Standardizes the inputs, then solves one SMO problem per class (that class
/// vs the rest, labels +/-1). Non-convergence is recorded on the affected
/// problem, with the best iterate retained.
SvmModel svm_fit(const TrainingSet& data, const SvmParams& params);

/// Per-class decision values sum_i coef_i K(s_i, z) + b over each problem's
/// support set, z = standardized x.
std::vector<double> svm_decision(const SvmModel& model, const FeatureVector& x);

/// Argmax of svm_decision; ties toward the smaller class id.
int svm_predict(const SvmModel& model, const FeatureVector& x);

}  // namespace texturemap
