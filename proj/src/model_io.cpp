#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "texturemap/error.hpp"
#include "texturemap/model_io.hpp"

namespace texturemap {

namespace {

constexpr const char* kMagic = "texturemap-model";
constexpr const char* kVersion = "v1";

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_reals(std::ostream& out, const char* key,
                 const std::array<double, kFeatureCount>& values) {
  out << key;
  for (double v : values) out << ' ' << format_real(v);
  out << '\n';
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  /// Next non-empty line, split into whitespace-separated fields.
  std::vector<std::string> next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::istringstream fields(line);
      std::vector<std::string> out;
      std::string field;
      while (fields >> field) out.push_back(std::move(field));
      if (!out.empty()) return out;
    }
    fail(std::string("unexpected end of file, expected ") + what);
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw DataError(name_ + " line " + std::to_string(line_no_) + ": " + message);
  }

  double real(const std::string& field, const char* what) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      if (used != field.size()) fail(std::string("malformed ") + what);
      return v;
    } catch (const std::logic_error&) {
      fail(std::string("malformed ") + what);
    }
  }

  int integer(const std::string& field, const char* what) const {
    try {
      std::size_t used = 0;
      const int v = std::stoi(field, &used);
      if (used != field.size()) fail(std::string("malformed ") + what);
      return v;
    } catch (const std::logic_error&) {
      fail(std::string("malformed ") + what);
    }
  }

  std::array<double, kFeatureCount> reals(const std::vector<std::string>& fields,
                                          const char* key) {
    if (fields.size() != 1 + kFeatureCount || fields[0] != key) {
      fail(std::string("expected `") + key + "` with " + std::to_string(kFeatureCount) +
           " values");
    }
    std::array<double, kFeatureCount> out;
    for (int f = 0; f < kFeatureCount; ++f) {
      out[static_cast<std::size_t>(f)] = real(fields[static_cast<std::size_t>(f) + 1], key);
    }
    return out;
  }

 private:
  std::istream& in_;
  std::string name_;
  int line_no_ = 0;
};

void write_metadata(std::ostream& out, const StoredModel& stored) {
  const ModelMetadata& m = stored.meta;
  out << "levels " << m.levels << '\n';
  out << "window " << m.window << '\n';
  out << "offset " << m.offset.distance << ' ' << to_degrees(m.offset.direction) << ' '
      << (m.offset.symmetric ? "symmetric" : "asymmetric") << ' '
      << (m.offset.average_directions ? "averaged" : "single") << '\n';
  out << "features";
  for (const char* name : kFeatureNames) out << ' ' << name;
  out << '\n';
  const ClassMap& classes = stored.classes();
  out << "classes " << classes.size() << '\n';
  for (int c = 0; c < classes.size(); ++c) {
    out << "class " << c << ' ' << classes.name(c) << '\n';
  }
}

void write_nb(std::ostream& out, const NbModel& model) {
  for (const NbClassStats& stats : model.per_class) {
    out << "prior " << format_real(stats.prior) << '\n';
    write_reals(out, "mean", stats.mean);
    write_reals(out, "variance", stats.variance);
  }
}

void write_svm(std::ostream& out, const SvmModel& model) {
  write_reals(out, "standardizer_mean", model.standardizer.mean());
  write_reals(out, "standardizer_stddev", model.standardizer.stddev());
  out << "kernel " << (model.kernel.type == KernelType::rbf ? "rbf" : "linear") << ' '
      << format_real(model.kernel.gamma) << '\n';
  for (const BinaryProblem& problem : model.problems) {
    out << "problem " << format_real(problem.C) << ' ' << format_real(problem.bias) << ' '
        << problem.support.size() << '\n';
    for (const SupportVector& sv : problem.support) {
      out << "sv " << format_real(sv.coef);
      for (double v : sv.z) out << ' ' << format_real(v);
      out << '\n';
    }
  }
}

}  // namespace

const ClassMap& StoredModel::classes() const {
  if (const auto* nb = std::get_if<NbModel>(&model)) return nb->classes;
  return std::get<SvmModel>(model).classes;
}

int StoredModel::predict(const FeatureVector& x) const {
  if (const auto* nb = std::get_if<NbModel>(&model)) return nb_predict(*nb, x).label;
  return svm_predict(std::get<SvmModel>(model), x);
}

void write_model(std::ostream& out, const StoredModel& stored) {
  out << kMagic << ' ' << kVersion << ' ' << (stored.is_svm() ? "svm" : "nb") << '\n';
  write_metadata(out, stored);
  if (const auto* nb = std::get_if<NbModel>(&stored.model)) {
    write_nb(out, *nb);
  } else {
    write_svm(out, std::get<SvmModel>(stored.model));
  }
  if (!out) throw IoError("failed writing model stream");
}

void write_model(const std::filesystem::path& path, const StoredModel& stored) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_model(out, stored);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

StoredModel read_model(std::istream& in, const std::string& name) {
  LineReader reader(in, name);

  const auto header = reader.next("model header");
  if (header.size() != 3 || header[0] != kMagic) {
    throw FormatError(name + ": not a texturemap model file");
  }
  if (header[1] != kVersion) {
    throw FormatError(name + ": unsupported model version `" + header[1] + "`");
  }
  const std::string& kind = header[2];
  if (kind != "nb" && kind != "svm") {
    throw FormatError(name + ": unknown model kind `" + kind + "`");
  }

  StoredModel stored;

  auto fields = reader.next("levels");
  if (fields.size() != 2 || fields[0] != "levels") reader.fail("expected `levels <G>`");
  stored.meta.levels = reader.integer(fields[1], "levels");
  if (stored.meta.levels < 2) reader.fail("levels must be at least 2");

  fields = reader.next("window");
  if (fields.size() != 2 || fields[0] != "window") reader.fail("expected `window <size>`");
  stored.meta.window = reader.integer(fields[1], "window");
  if (stored.meta.window < 2) reader.fail("window must be at least 2");

  fields = reader.next("offset");
  if (fields.size() != 5 || fields[0] != "offset") {
    reader.fail("expected `offset <distance> <degrees> <symmetric|asymmetric> <averaged|single>`");
  }
  stored.meta.offset.distance = reader.integer(fields[1], "offset distance");
  if (stored.meta.offset.distance < 1) reader.fail("offset distance must be at least 1");
  const int degrees = reader.integer(fields[2], "offset direction");
  if (degrees != 0 && degrees != 45 && degrees != 90 && degrees != 135) {
    reader.fail("offset direction must be one of 0, 45, 90, 135");
  }
  stored.meta.offset.direction = direction_from_degrees(degrees);
  if (fields[3] == "symmetric") {
    stored.meta.offset.symmetric = true;
  } else if (fields[3] == "asymmetric") {
    stored.meta.offset.symmetric = false;
  } else {
    reader.fail("offset symmetry must be `symmetric` or `asymmetric`");
  }
  if (fields[4] == "averaged") {
    stored.meta.offset.average_directions = true;
  } else if (fields[4] == "single") {
    stored.meta.offset.average_directions = false;
  } else {
    reader.fail("offset direction mode must be `averaged` or `single`");
  }

  fields = reader.next("features");
  if (fields.size() != 1 + kFeatureCount || fields[0] != "features") {
    reader.fail("expected the feature order line");
  }
  for (int f = 0; f < kFeatureCount; ++f) {
    if (fields[static_cast<std::size_t>(f) + 1] != kFeatureNames[static_cast<std::size_t>(f)]) {
      reader.fail(std::string("unsupported feature order (expected ") +
                  kFeatureNames[static_cast<std::size_t>(f)] + " at position " +
                  std::to_string(f + 1) + ")");
    }
  }

  fields = reader.next("classes");
  if (fields.size() != 2 || fields[0] != "classes") reader.fail("expected `classes <K>`");
  const int num_classes = reader.integer(fields[1], "class count");
  if (num_classes < 2) reader.fail("model must have at least 2 classes");

  std::vector<std::string> class_names;
  class_names.reserve(static_cast<std::size_t>(num_classes));
  for (int c = 0; c < num_classes; ++c) {
    fields = reader.next("class name");
    if (fields.size() < 3 || fields[0] != "class") reader.fail("expected `class <id> <name>`");
    if (reader.integer(fields[1], "class id") != c) {
      reader.fail("class ids must be consecutive starting at 0");
    }
    std::string class_name = fields[2];
    for (std::size_t i = 3; i < fields.size(); ++i) class_name += ' ' + fields[i];
    class_names.push_back(std::move(class_name));
  }
  ClassMap classes(std::move(class_names));

  if (kind == "nb") {
    NbModel nb;
    nb.classes = std::move(classes);
    for (int c = 0; c < num_classes; ++c) {
      NbClassStats stats;
      fields = reader.next("prior");
      if (fields.size() != 2 || fields[0] != "prior") reader.fail("expected `prior <p>`");
      stats.prior = reader.real(fields[1], "prior");
      if (!(stats.prior > 0.0 && stats.prior <= 1.0)) reader.fail("prior must be in (0, 1]");
      stats.mean = reader.reals(reader.next("mean"), "mean");
      stats.variance = reader.reals(reader.next("variance"), "variance");
      for (double v : stats.variance) {
        if (!(v > 0.0)) reader.fail("variances must be positive");
      }
      nb.per_class.push_back(stats);
    }
    stored.model = std::move(nb);
    return stored;
  }

  SvmModel svm;
  svm.classes = std::move(classes);
  const auto mean = reader.reals(reader.next("standardizer_mean"), "standardizer_mean");
  const auto stddev = reader.reals(reader.next("standardizer_stddev"), "standardizer_stddev");
  for (double s : stddev) {
    if (!(s > 0.0)) reader.fail("standardizer stddev must be positive");
  }
  svm.standardizer = Standardizer(mean, stddev);

  fields = reader.next("kernel");
  if (fields.size() != 3 || fields[0] != "kernel") {
    reader.fail("expected `kernel <linear|rbf> <gamma>`");
  }
  if (fields[1] == "rbf") {
    svm.kernel.type = KernelType::rbf;
  } else if (fields[1] == "linear") {
    svm.kernel.type = KernelType::linear;
  } else {
    reader.fail("kernel must be `linear` or `rbf`");
  }
  svm.kernel.gamma = reader.real(fields[2], "gamma");
  if (svm.kernel.type == KernelType::rbf && !(svm.kernel.gamma > 0.0)) {
    reader.fail("rbf gamma must be positive");
  }

  for (int c = 0; c < num_classes; ++c) {
    fields = reader.next("problem");
    if (fields.size() != 4 || fields[0] != "problem") {
      reader.fail("expected `problem <C> <b> <n_sv>`");
    }
    BinaryProblem problem;
    problem.C = reader.real(fields[1], "C");
    if (!(problem.C > 0.0)) reader.fail("C must be positive");
    problem.bias = reader.real(fields[2], "bias");
    const int n_sv = reader.integer(fields[3], "support vector count");
    if (n_sv < 0) reader.fail("support vector count must be non-negative");
    problem.converged = true;
    for (int s = 0; s < n_sv; ++s) {
      fields = reader.next("support vector");
      if (fields.size() != 2 + kFeatureCount || fields[0] != "sv") {
        reader.fail("expected `sv <coef> <f1> <f2> <f3> <f4>`");
      }
      SupportVector sv;
      sv.coef = reader.real(fields[1], "support coefficient");
      for (int f = 0; f < kFeatureCount; ++f) {
        sv.z[static_cast<std::size_t>(f)] =
            reader.real(fields[static_cast<std::size_t>(f) + 2], "support value");
      }
      problem.support.push_back(sv);
    }
    svm.problems.push_back(std::move(problem));
  }
  stored.model = std::move(svm);
  return stored;
}

StoredModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_model(in, path.string());
}

}  // namespace texturemap
