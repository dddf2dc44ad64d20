#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "texturemap/classifiers.hpp"

namespace texturemap {

Standardizer::Standardizer(std::array<double, kFeatureCount> mean,
                           std::array<double, kFeatureCount> stddev)
    : mean_(mean), stddev_(stddev) {
  for (double s : stddev_) {
    if (!(s > 0.0)) {
      throw InvalidArgument("Standardizer: standard deviations must be positive");
    }
  }
}

std::array<double, kFeatureCount> Standardizer::apply(
    const std::array<double, kFeatureCount>& x) const {
  std::array<double, kFeatureCount> z;
  for (int f = 0; f < kFeatureCount; ++f) {
    z[f] = (x[f] - mean_[f]) / stddev_[f];
  }
  return z;
}

Standardizer standardize_fit(const TrainingSet& data) {
  if (data.samples.size() < 2) {
    throw InvalidArgument("standardize_fit: need at least 2 samples");
  }
  const double n = static_cast<double>(data.samples.size());
  std::array<double, kFeatureCount> mean{};
  for (const LabeledSample& s : data.samples) {
    const auto v = s.features.values();
    for (int f = 0; f < kFeatureCount; ++f) mean[f] += v[f];
  }
  for (int f = 0; f < kFeatureCount; ++f) mean[f] /= n;
  std::array<double, kFeatureCount> stddev{};
  for (const LabeledSample& s : data.samples) {
    const auto v = s.features.values();
    for (int f = 0; f < kFeatureCount; ++f) {
      const double d = v[f] - mean[f];
      stddev[f] += d * d;
    }
  }
  for (int f = 0; f < kFeatureCount; ++f) {
    stddev[f] = std::max(std::sqrt(stddev[f] / n), 1e-12);
  }
  return Standardizer(mean, stddev);
}

FeatureVector standardize_apply(const Standardizer& s, const FeatureVector& x) {
  return FeatureVector::from_values(s.apply(x.values()));
}

double kernel_value(const KernelSpec& k, const std::array<double, kFeatureCount>& a,
                    const std::array<double, kFeatureCount>& b) {
  if (k.type == KernelType::linear) {
    double dot = 0.0;
    for (int f = 0; f < kFeatureCount; ++f) dot += a[f] * b[f];
    return dot;
  }
  double dist2 = 0.0;
  for (int f = 0; f < kFeatureCount; ++f) {
    const double d = a[f] - b[f];
    dist2 += d * d;
  }
  return std::exp(-k.gamma * dist2);
}

bool SvmModel::all_converged() const {
  return std::all_of(problems.begin(), problems.end(),
                     [](const BinaryProblem& p) { return p.converged; });
}

namespace {

struct SmoResult {
  std::vector<double> alpha;
  double bias = 0.0;
  bool converged = false;
};

// Simplified SMO: sweep all multipliers, pair each KKT violator with a
// random second multiplier, and solve the two-variable subproblem in closed
// form. Convergence is declared on the first sweep with no violations, so
// every sample satisfies its KKT condition within tol at exit.
class SmoSolver {
 public:
  SmoSolver(const std::vector<std::array<double, kFeatureCount>>& points,
            const std::vector<int>& labels, const KernelSpec& kernel, double C, double tol,
            std::uint32_t seed)
      : z_(points), y_(labels), C_(C), tol_(tol), rng_(seed) {
    const std::size_t n = z_.size();
    alpha_.assign(n, 0.0);
    // Full Gram cache; problems here stay small enough (a few thousand
    // samples) that n^2 doubles are affordable.
    gram_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double k = kernel_value(kernel, z_[i], z_[j]);
        gram_[i * n + j] = k;
        gram_[j * n + i] = k;
      }
    }
  }

  SmoResult solve(int max_passes) {
    const int n = static_cast<int>(z_.size());
    const int sweep_cap = max_passes * 10;
    int quiet_sweeps = 0;
    bool converged = false;
    for (int sweep = 0; sweep < sweep_cap; ++sweep) {
      int changed = 0;
      int violations = 0;
      for (int i = 0; i < n; ++i) {
        const double error_i = decision(i) - y_[static_cast<std::size_t>(i)];
        const double r = y_[static_cast<std::size_t>(i)] * error_i;
        const double a = alpha_[static_cast<std::size_t>(i)];
        if ((r < -tol_ && a < C_) || (r > tol_ && a > 0.0)) {
          ++violations;
          if (take_step(i, pick_partner(i, n), error_i)) {
            ++changed;
          }
        }
      }
      if (violations == 0) {
        converged = true;
        break;
      }
      if (changed == 0) {
        // Pair steps cannot move the bias once the multipliers are pairwise
        // optimal (it cancels out of every error difference), so recenter it
        // from the KKT interval of the current multipliers and re-test.
        recenter_bias();
        if (count_violations() == 0) {
          converged = true;
          break;
        }
        if (++quiet_sweeps >= max_passes) break;
      } else {
        quiet_sweeps = 0;
      }
    }
    if (!converged) recenter_bias();
    return SmoResult{std::move(alpha_), bias_, converged};
  }

 private:
  double gram(int i, int j) const {
    return gram_[static_cast<std::size_t>(i) * z_.size() + static_cast<std::size_t>(j)];
  }

  /// Decision value without the bias term.
  double margin(int i) const {
    double f = 0.0;
    const std::size_t n = z_.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (alpha_[k] != 0.0) {
        f += alpha_[k] * y_[k] * gram_[k * n + static_cast<std::size_t>(i)];
      }
    }
    return f;
  }

  double decision(int i) const { return margin(i) + bias_; }

  /// The KKT conditions bound the bias: every sample yields either an exact
  /// target (interior alpha), a lower bound, or an upper bound. Interior
  /// targets are averaged; otherwise the midpoint of the bound interval is
  /// taken.
  void recenter_bias() {
    const int n = static_cast<int>(z_.size());
    const double bound_eps = 1e-12 * C_;
    double interior_sum = 0.0;
    int interior_count = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double a = alpha_[static_cast<std::size_t>(i)];
      const int y = y_[static_cast<std::size_t>(i)];
      const double target = y - margin(i);  // bias making y*f(x_i) == 1
      if (a > bound_eps && a < C_ - bound_eps) {
        interior_sum += target;
        ++interior_count;
      } else if ((a <= bound_eps && y > 0) || (a >= C_ - bound_eps && y < 0)) {
        lo = std::max(lo, target);
      } else {
        hi = std::min(hi, target);
      }
    }
    if (interior_count > 0) {
      bias_ = interior_sum / interior_count;
    } else if (std::isinf(lo)) {
      bias_ = std::isinf(hi) ? 0.0 : hi;
    } else if (std::isinf(hi)) {
      bias_ = lo;
    } else {
      bias_ = 0.5 * (lo + hi);
    }
  }

  int count_violations() const {
    const int n = static_cast<int>(z_.size());
    int violations = 0;
    for (int i = 0; i < n; ++i) {
      const double r =
          y_[static_cast<std::size_t>(i)] * (decision(i) - y_[static_cast<std::size_t>(i)]);
      const double a = alpha_[static_cast<std::size_t>(i)];
      if ((r < -tol_ && a < C_) || (r > tol_ && a > 0.0)) ++violations;
    }
    return violations;
  }

  int pick_partner(int i, int n) {
    std::uniform_int_distribution<int> dist(0, n - 2);
    int j = dist(rng_);
    if (j >= i) ++j;
    return j;
  }

  bool take_step(int i, int j, double error_i) {
    if (i == j) return false;
    const auto si = static_cast<std::size_t>(i);
    const auto sj = static_cast<std::size_t>(j);
    const double error_j = decision(j) - y_[sj];
    const double ai_old = alpha_[si];
    const double aj_old = alpha_[sj];

    double low, high;
    if (y_[si] != y_[sj]) {
      low = std::max(0.0, aj_old - ai_old);
      high = std::min(C_, C_ + aj_old - ai_old);
    } else {
      low = std::max(0.0, ai_old + aj_old - C_);
      high = std::min(C_, ai_old + aj_old);
    }
    if (low >= high) return false;

    const double eta = 2.0 * gram(i, j) - gram(i, i) - gram(j, j);
    if (eta >= 0.0) return false;

    double aj = aj_old - y_[sj] * (error_i - error_j) / eta;
    aj = std::clamp(aj, low, high);
    // Snap rounding dust onto the box bounds so the support set stays exact.
    // Both multipliers need this: an alpha stored a hair inside the box would
    // be held to the interior KKT condition, which an at-bound sample cannot
    // meet, while the correcting step stays below the minimum step size.
    const double bound_eps = 1e-12 * C_;
    if (aj < bound_eps) aj = 0.0;
    if (aj > C_ - bound_eps) aj = C_;
    if (std::abs(aj - aj_old) < 1e-8 * std::max(1.0, C_)) return false;

    double ai = ai_old + y_[si] * y_[sj] * (aj_old - aj);
    if (ai < bound_eps) ai = 0.0;
    if (ai > C_ - bound_eps) ai = C_;
    alpha_[si] = ai;
    alpha_[sj] = aj;

    const double di = y_[si] * (ai - ai_old);
    const double dj = y_[sj] * (aj - aj_old);
    const double b1 = bias_ - error_i - di * gram(i, i) - dj * gram(i, j);
    const double b2 = bias_ - error_j - di * gram(i, j) - dj * gram(j, j);
    if (ai > 0.0 && ai < C_) {
      bias_ = b1;
    } else if (aj > 0.0 && aj < C_) {
      bias_ = b2;
    } else {
      bias_ = 0.5 * (b1 + b2);
    }
    return true;
  }

  const std::vector<std::array<double, kFeatureCount>>& z_;
  const std::vector<int>& y_;
  double C_;
  double tol_;
  std::mt19937 rng_;
  std::vector<double> alpha_;
  std::vector<double> gram_;
  double bias_ = 0.0;
};

}  // namespace

SvmModel svm_fit(const TrainingSet& data, const SvmParams& params) {
  data.validated_class_counts();
  if (!(params.C > 0.0)) {
    throw InvalidArgument("svm_fit: C must be positive");
  }
  if (!(params.tol > 0.0) || params.max_passes < 1) {
    throw InvalidArgument("svm_fit: tol must be positive and max_passes at least 1");
  }

  SvmModel model;
  model.classes = data.classes;
  model.standardizer = standardize_fit(data);

  const std::size_t n = data.samples.size();
  std::vector<std::array<double, kFeatureCount>> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = model.standardizer.apply(data.samples[i].features.values());
  }

  double gamma = params.gamma;
  if (gamma <= 0.0) {
    // 1/(k*Var), Var = mean per-feature variance of the standardized data.
    std::array<double, kFeatureCount> mean{};
    for (const auto& v : z) {
      for (int f = 0; f < kFeatureCount; ++f) mean[f] += v[f];
    }
    for (int f = 0; f < kFeatureCount; ++f) mean[f] /= static_cast<double>(n);
    double var_sum = 0.0;
    for (const auto& v : z) {
      for (int f = 0; f < kFeatureCount; ++f) {
        const double d = v[f] - mean[f];
        var_sum += d * d;
      }
    }
    double mean_var = var_sum / (static_cast<double>(n) * kFeatureCount);
    if (mean_var < 1e-12) mean_var = 1.0;
    gamma = 1.0 / (kFeatureCount * mean_var);
  }
  model.kernel = KernelSpec{params.kernel, gamma};

  std::vector<int> y(n);
  for (int c = 0; c < data.classes.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = data.samples[i].label == c ? 1 : -1;
    }
    const std::uint32_t problem_seed =
        params.seed + static_cast<std::uint32_t>(c) * 0x9E3779B9u;
    SmoSolver solver(z, y, model.kernel, params.C, params.tol, problem_seed);
    SmoResult result = solver.solve(params.max_passes);

    BinaryProblem problem;
    problem.C = params.C;
    problem.bias = result.bias;
    problem.converged = result.converged;
    for (std::size_t i = 0; i < n; ++i) {
      if (result.alpha[i] > 0.0) {
        problem.support.push_back(SupportVector{result.alpha[i] * y[i], z[i]});
      }
    }
    model.problems.push_back(std::move(problem));
  }
  return model;
}

std::vector<double> svm_decision(const SvmModel& model, const FeatureVector& x) {
  const std::array<double, kFeatureCount> z = model.standardizer.apply(x.values());
  std::vector<double> scores;
  scores.reserve(model.problems.size());
  for (const BinaryProblem& problem : model.problems) {
    double f = problem.bias;
    for (const SupportVector& sv : problem.support) {
      f += sv.coef * kernel_value(model.kernel, sv.z, z);
    }
    scores.push_back(f);
  }
  return scores;
}

int svm_predict(const SvmModel& model, const FeatureVector& x) {
  const std::vector<double> scores = svm_decision(model, x);
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace texturemap
