#include <cmath>
#include <numbers>

#include "texturemap/classifiers.hpp"

namespace texturemap {

std::vector<std::size_t> TrainingSet::validated_class_counts() const {
  if (classes.size() < 2) {
    throw InvalidArgument("training set needs at least 2 classes");
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(classes.size()), 0);
  for (const LabeledSample& s : samples) {
    if (!classes.contains(s.label)) {
      throw InvalidArgument("sample label " + std::to_string(s.label) +
                            " is not in the class map");
    }
    ++counts[static_cast<std::size_t>(s.label)];
  }
  for (int c = 0; c < classes.size(); ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw InvalidArgument("class " + std::to_string(c) + " ('" + classes.name(c) +
                            "') has no samples");
    }
  }
  return counts;
}

NbModel nb_fit(const TrainingSet& data) {
  const std::vector<std::size_t> counts = data.validated_class_counts();
  const int num_classes = data.classes.size();
  const double n = static_cast<double>(data.samples.size());

  // Global per-feature population variance sets the scale of the floor.
  std::array<double, kFeatureCount> global_mean{};
  for (const LabeledSample& s : data.samples) {
    const auto v = s.features.values();
    for (int f = 0; f < kFeatureCount; ++f) global_mean[f] += v[f];
  }
  for (int f = 0; f < kFeatureCount; ++f) global_mean[f] /= n;
  std::array<double, kFeatureCount> global_var{};
  for (const LabeledSample& s : data.samples) {
    const auto v = s.features.values();
    for (int f = 0; f < kFeatureCount; ++f) {
      const double d = v[f] - global_mean[f];
      global_var[f] += d * d;
    }
  }
  for (int f = 0; f < kFeatureCount; ++f) global_var[f] /= n;

  constexpr double kEps = 1e-9;
  constexpr double kDelta = 1e-12;

  NbModel model;
  model.classes = data.classes;
  model.per_class.resize(static_cast<std::size_t>(num_classes));
  for (int c = 0; c < num_classes; ++c) {
    NbClassStats& stats = model.per_class[static_cast<std::size_t>(c)];
    const double nc = static_cast<double>(counts[static_cast<std::size_t>(c)]);
    stats.prior = nc / n;
    for (const LabeledSample& s : data.samples) {
      if (s.label != c) continue;
      const auto v = s.features.values();
      for (int f = 0; f < kFeatureCount; ++f) stats.mean[f] += v[f];
    }
    for (int f = 0; f < kFeatureCount; ++f) stats.mean[f] /= nc;
    for (const LabeledSample& s : data.samples) {
      if (s.label != c) continue;
      const auto v = s.features.values();
      for (int f = 0; f < kFeatureCount; ++f) {
        const double d = v[f] - stats.mean[f];
        stats.variance[f] += d * d;
      }
    }
    for (int f = 0; f < kFeatureCount; ++f) {
      stats.variance[f] /= nc;
      const double floor = kEps * global_var[f] + kDelta;
      stats.variance[f] = std::max(stats.variance[f], floor);
    }
  }
  return model;
}

Prediction nb_predict(const NbModel& model, const FeatureVector& x) {
  const auto v = x.values();
  Prediction result;
  result.scores.reserve(model.per_class.size());
  for (const NbClassStats& stats : model.per_class) {
    double score = std::log(stats.prior);
    for (int f = 0; f < kFeatureCount; ++f) {
      const double var = stats.variance[f];
      const double d = v[f] - stats.mean[f];
      score += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
    }
    result.scores.push_back(score);
  }
  result.label = 0;
  for (std::size_t c = 1; c < result.scores.size(); ++c) {
    if (result.scores[c] > result.scores[static_cast<std::size_t>(result.label)]) {
      result.label = static_cast<int>(c);
    }
  }
  return result;
}

}  // namespace texturemap
