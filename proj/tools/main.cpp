#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "texturemap/classifiers.hpp"
#include "texturemap/error.hpp"
#include "texturemap/evaluation.hpp"
#include "texturemap/feature_table.hpp"
#include "texturemap/glcm.hpp"
#include "texturemap/image.hpp"
#include "texturemap/image_io.hpp"
#include "texturemap/model_io.hpp"

using namespace texturemap;

namespace {

struct ExtractionOptions {
  int window = 50;
  int levels = 8;
  int distance = 1;
  int direction = 0;
  bool symmetric = true;
  bool average_directions = false;
};

OffsetSpec to_offset(const ExtractionOptions& x) {
  return OffsetSpec{x.distance, direction_from_degrees(x.direction), x.symmetric,
                    x.average_directions};
}

struct ClassifierOptions {
  std::string classifier = "nb";
  double C = 1.0;
  double gamma = 0.0;  // 0 selects 1/(k*Var) on the standardized features
  std::string kernel = "rbf";
  double tol = 1e-3;
  int max_passes = 100;
  std::uint32_t seed = 42;
};

ClassifierSpec to_spec(const ClassifierOptions& o) {
  ClassifierSpec spec;
  spec.kind = o.classifier == "svm" ? ClassifierSpec::Kind::svm
                                    : ClassifierSpec::Kind::naive_bayes;
  spec.svm.C = o.C;
  spec.svm.kernel = o.kernel == "linear" ? KernelType::linear : KernelType::rbf;
  spec.svm.gamma = o.gamma;
  spec.svm.tol = o.tol;
  spec.svm.max_passes = o.max_passes;
  spec.svm.seed = o.seed;
  return spec;
}

struct OffsetFlags {
  CLI::Option* levels = nullptr;
  CLI::Option* distance = nullptr;
  CLI::Option* direction = nullptr;
  CLI::Option* symmetric = nullptr;
  CLI::Option* average = nullptr;
};

OffsetFlags add_offset_flags(CLI::App* cmd, ExtractionOptions& x) {
  OffsetFlags flags;
  flags.levels = cmd->add_option("--levels", x.levels, "Quantization levels G")
                     ->check(CLI::Range(2, 256))
                     ->capture_default_str();
  flags.distance = cmd->add_option("--distance", x.distance, "Pair distance in pixels")
                       ->check(CLI::Range(1, 1 << 16))
                       ->capture_default_str();
  flags.direction = cmd->add_option("--direction", x.direction, "Pair direction in degrees")
                        ->check(CLI::IsMember({0, 45, 90, 135}))
                        ->capture_default_str();
  flags.symmetric = cmd->add_flag("--symmetric,!--no-symmetric", x.symmetric,
                                  "Count each pair in both orders")
                        ->capture_default_str();
  flags.average = cmd->add_flag("--avg-directions,!--no-avg-directions", x.average_directions,
                                "Accumulate counts over all four directions")
                      ->capture_default_str();
  return flags;
}

CLI::Option* add_window_flag(CLI::App* cmd, ExtractionOptions& x) {
  return cmd->add_option("--window", x.window, "Square window size in pixels")
      ->check(CLI::Range(2, 1 << 16))
      ->capture_default_str();
}

void add_classifier_flags(CLI::App* cmd, ClassifierOptions& c) {
  cmd->add_option("--classifier", c.classifier, "Classifier kind")
      ->check(CLI::IsMember({"nb", "svm"}))
      ->capture_default_str();
  cmd->add_option("--C", c.C, "SVM box constraint")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--gamma", c.gamma, "RBF width; 0 selects 1/(k*Var)")
      ->capture_default_str();
  cmd->add_option("--kernel", c.kernel, "SVM kernel")
      ->check(CLI::IsMember({"linear", "rbf"}))
      ->capture_default_str();
  cmd->add_option("--tol", c.tol, "SMO KKT tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-passes", c.max_passes, "SMO sweep budget multiplier")
      ->check(CLI::Range(1, 1 << 20))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for fold assignment and SMO pair choice")
      ->capture_default_str();
}

void add_config_flag(CLI::App* cmd) {
  cmd->add_option("--config", "Read defaults from a flat `key = value` file");
}

std::string trim_copy(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return "";
  return s.substr(from, s.find_last_not_of(" \t\r") - from + 1);
}

/// Applies a flat `key = value` config file to the subcommand's own options.
/// Values are fed through the options' regular converters and validators;
/// keys already set on the command line win. A key the subcommand does not
/// recognize is an error: silently ignoring a typo would make the user
/// believe a setting took effect.
void apply_config_file(CLI::App* cmd) {
  const CLI::Option* cfg = cmd->get_option("--config");
  if (cfg->empty()) return;
  const std::string path = cfg->as<std::string>();

  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim_copy(line);
    if (text.empty() || text.front() == '#') continue;
    const std::string where = path + " line " + std::to_string(lineno);

    const auto eq = text.find('=');
    if (eq == std::string::npos) throw FormatError(where + ": expected `key = value`");
    const std::string key = trim_copy(text.substr(0, eq));
    const std::string value = trim_copy(text.substr(eq + 1));
    if (key.empty()) throw FormatError(where + ": empty key");

    CLI::Option* op = cmd->get_option_no_throw("--" + key);
    if (op == nullptr || op == cfg) throw FormatError(where + ": unknown config key `" + key + "`");
    if (op->count() > 0) continue;  // explicit flags override the file
    op->add_result(value);
    op->run_callback();
  }
}

// ---------------------------------------------------------------------------
// Shared loading helpers
// ---------------------------------------------------------------------------

struct LoadedTables {
  TrainingSet data;
  int window = 0;  // uniform window size across rows
};

LoadedTables load_training_tables(const std::vector<std::string>& paths,
                                  const std::string& classes_path) {
  LoadedTables out;
  int max_label = -1;
  for (const std::string& path : paths) {
    const FeatureTable table = read_feature_table(path);
    if (!table.has_labels) {
      throw DataError(path + ": table has no label column; re-run extract with --labels");
    }
    for (const FeatureRow& row : table.rows) {
      if (row.label == kUnlabeled) continue;
      if (out.window == 0) {
        out.window = row.window.size;
      } else if (row.window.size != out.window) {
        throw DataError(path + ": window size " + std::to_string(row.window.size) +
                        " differs from " + std::to_string(out.window) +
                        " seen earlier; train on one window size at a time");
      }
      out.data.samples.push_back(LabeledSample{row.features, row.label});
      max_label = std::max(max_label, row.label);
    }
  }
  if (out.data.samples.empty()) {
    throw DataError("no labeled rows in the training table(s)");
  }

  if (!classes_path.empty()) {
    out.data.classes = load_class_map(classes_path);
  } else {
    std::vector<bool> seen(static_cast<std::size_t>(max_label) + 1, false);
    for (const LabeledSample& s : out.data.samples) {
      seen[static_cast<std::size_t>(s.label)] = true;
    }
    for (int id = 0; id <= max_label; ++id) {
      if (!seen[static_cast<std::size_t>(id)]) {
        throw DataError("class id " + std::to_string(id) +
                        " has no rows; supply --classes to declare sparse ids");
      }
    }
    out.data.classes = ClassMap::numbered(max_label + 1);
  }
  for (const LabeledSample& s : out.data.samples) {
    if (!out.data.classes.contains(s.label)) {
      throw DataError("label " + std::to_string(s.label) + " is outside the class map (" +
                      std::to_string(out.data.classes.size()) + " classes)");
    }
  }
  return out;
}

std::vector<int> label_windows(const GrayImage& gray, const std::string& labels_path,
                               const std::vector<WindowSpec>& windows, double purity) {
  const LabelRaster raster = load_label_raster(labels_path);
  if (raster.width() != gray.width() || raster.height() != gray.height()) {
    throw DataError(labels_path + ": label raster is " + std::to_string(raster.width()) + "x" +
                    std::to_string(raster.height()) + " but the image is " +
                    std::to_string(gray.width()) + "x" + std::to_string(gray.height()));
  }
  std::vector<int> labels;
  labels.reserve(windows.size());
  for (const WindowSpec& w : windows) {
    labels.push_back(window_label(raster, w, purity));
  }
  return labels;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void run_extract(const std::string& image_path, const std::string& labels_path,
                 const ExtractionOptions& x, double purity, bool keep_unlabeled, int threads,
                 const std::string& out_path) {
  const GrayImage gray = load_gray(image_path);
  const QuantizedImage q = quantize(gray, x.levels);
  std::vector<WindowSpec> windows = tile_windows(q, x.window);

  FeatureTable table;
  table.has_labels = !labels_path.empty();
  std::vector<int> labels;
  if (table.has_labels) {
    labels = label_windows(gray, labels_path, windows, purity);
    if (!keep_unlabeled) {
      std::vector<WindowSpec> kept_windows;
      std::vector<int> kept_labels;
      for (std::size_t i = 0; i < windows.size(); ++i) {
        if (labels[i] != kUnlabeled) {
          kept_windows.push_back(windows[i]);
          kept_labels.push_back(labels[i]);
        }
      }
      windows = std::move(kept_windows);
      labels = std::move(kept_labels);
    }
  }

  const std::vector<FeatureVector> features = extract_features_batch(q, windows, to_offset(x), threads);
  table.rows.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    table.rows.push_back(
        FeatureRow{windows[i], features[i], table.has_labels ? labels[i] : kUnlabeled});
  }
  write_feature_table(out_path, table);
  std::cout << "wrote " << table.rows.size() << " windows to " << out_path << '\n';
}

void run_train(const std::vector<std::string>& table_paths, const std::string& classes_path,
               const ClassifierOptions& copts, ExtractionOptions x, bool window_given,
               const std::string& out_path) {
  const LoadedTables loaded = load_training_tables(table_paths, classes_path);
  if (window_given && x.window != loaded.window) {
    throw InvalidArgument("--window " + std::to_string(x.window) +
                          " disagrees with the table's window size " +
                          std::to_string(loaded.window));
  }
  x.window = loaded.window;

  const std::vector<std::size_t> counts = loaded.data.validated_class_counts();
  const ClassifierSpec spec = to_spec(copts);

  StoredModel stored;
  stored.meta = ModelMetadata{x.levels, x.window, to_offset(x)};

  std::cout << "training " << copts.classifier << " on " << loaded.data.samples.size()
            << " windows, " << loaded.data.classes.size() << " classes\n";
  for (int c = 0; c < loaded.data.classes.size(); ++c) {
    std::cout << "  " << loaded.data.classes.name(c) << ": "
              << counts[static_cast<std::size_t>(c)] << " windows\n";
  }

  if (spec.kind == ClassifierSpec::Kind::svm) {
    SvmModel model = svm_fit(loaded.data, spec.svm);
    for (int c = 0; c < model.classes.size(); ++c) {
      const BinaryProblem& p = model.problems[static_cast<std::size_t>(c)];
      std::cout << "  " << model.classes.name(c) << " vs rest: " << p.support.size()
                << " support vectors\n";
      if (!p.converged) {
        std::cout << "warning: SMO hit its sweep cap for " << model.classes.name(c)
                  << " vs rest; keeping the best iterate\n";
      }
    }
    stored.model = std::move(model);
  } else {
    stored.model = nb_fit(loaded.data);
  }

  write_model(std::filesystem::path(out_path), stored);
  std::cout << "wrote " << out_path << '\n';
}

void run_predict(const std::string& model_path, const std::string& image_path,
                 const std::string& out_path, const std::string& labels_path,
                 const std::string& overlay_path, double purity, int threads,
                 const ExtractionOptions& x, CLI::Option* window_flag,
                 const OffsetFlags& flags) {
  const StoredModel stored = read_model(std::filesystem::path(model_path));

  // Fail on any explicit setting that contradicts the model before touching pixels.
  const ModelMetadata& meta = stored.meta;
  if (window_flag->count() > 0 && x.window != meta.window) {
    throw InvalidArgument("--window " + std::to_string(x.window) +
                          " does not match the model (trained at window " +
                          std::to_string(meta.window) + ")");
  }
  if (flags.levels->count() > 0 && x.levels != meta.levels) {
    throw InvalidArgument("--levels " + std::to_string(x.levels) +
                          " does not match the model (trained at levels " +
                          std::to_string(meta.levels) + ")");
  }
  if (flags.distance->count() > 0 && x.distance != meta.offset.distance) {
    throw InvalidArgument("--distance " + std::to_string(x.distance) +
                          " does not match the model (trained at distance " +
                          std::to_string(meta.offset.distance) + ")");
  }
  if (flags.direction->count() > 0 &&
      direction_from_degrees(x.direction) != meta.offset.direction) {
    throw InvalidArgument("--direction " + std::to_string(x.direction) +
                          " does not match the model (trained at direction " +
                          std::to_string(to_degrees(meta.offset.direction)) + ")");
  }
  if (flags.symmetric->count() > 0 && x.symmetric != meta.offset.symmetric) {
    throw InvalidArgument("symmetry setting does not match the model (trained " +
                          std::string(meta.offset.symmetric ? "symmetric" : "asymmetric") + ")");
  }
  if (flags.average->count() > 0 && x.average_directions != meta.offset.average_directions) {
    throw InvalidArgument("direction averaging does not match the model (trained with " +
                          std::string(meta.offset.average_directions ? "averaged" : "single") +
                          " directions)");
  }

  const GrayImage gray = load_gray(image_path);
  const QuantizedImage q = quantize(gray, meta.levels);
  const std::vector<WindowSpec> windows = tile_windows(q, meta.window);
  const std::vector<FeatureVector> features =
      extract_features_batch(q, windows, meta.offset, threads);

  std::vector<int> preds;
  preds.reserve(windows.size());
  for (const FeatureVector& f : features) preds.push_back(stored.predict(f));

  std::ofstream out = open_output(out_path);
  out << "origin_x,origin_y,size,class_id\n";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    out << windows[i].x << ',' << windows[i].y << ',' << windows[i].size << ',' << preds[i]
        << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing " + out_path);

  if (!labels_path.empty()) {
    const std::vector<int> truths = label_windows(gray, labels_path, windows, purity);
    std::size_t labeled = 0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (truths[i] == kUnlabeled) continue;
      ++labeled;
      if (truths[i] == preds[i]) ++correct;
    }
    if (labeled > 0) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "accuracy over labeled windows: %.4f (%zu/%zu)\n",
                    static_cast<double>(correct) / static_cast<double>(labeled), correct,
                    labeled);
      std::cout << buf;
    } else {
      std::cout << "no window met the purity threshold; accuracy not reported\n";
    }
    if (!overlay_path.empty()) {
      const RgbImage overlay = misclassification_map(gray, windows, truths, preds);
      save_png(std::filesystem::path(overlay_path), overlay);
      std::cout << "wrote " << overlay_path << '\n';
    }
  }
  std::cout << "predicted " << windows.size() << " windows -> " << out_path << '\n';
}

void run_evaluate(const std::string& table_path, const std::string& classes_path,
                  const ClassifierOptions& copts, int folds, const std::string& out_path) {
  const LoadedTables loaded = load_training_tables({table_path}, classes_path);
  const CvResult result = cross_validate(loaded.data, to_spec(copts), folds, copts.seed);

  std::cout << folds << "-fold cross-validation (" << copts.classifier << ", seed "
            << copts.seed << ") on " << loaded.data.samples.size() << " windows\n";
  std::cout << format_evaluation_summary(result);
  if (!out_path.empty()) {
    std::ofstream out = open_output(out_path);
    write_evaluation_report(out, result);
    out.flush();
    if (!out) throw IoError("failed writing " + out_path);
    std::cout << "wrote " << out_path << '\n';
  }
}

void run_bench(const std::string& image_path, const std::vector<int>& sizes, int repeats,
               const ExtractionOptions& x, const std::string& out_path) {
  const GrayImage gray = load_gray(image_path);
  const QuantizedImage q = quantize(gray, x.levels);
  const BenchReport report = benchmark_runtime(q, sizes, repeats, to_offset(x));
  if (out_path.empty()) {
    write_bench_report(std::cout, report);
  } else {
    std::ofstream out = open_output(out_path);
    write_bench_report(out, report);
    out.flush();
    if (!out) throw IoError("failed writing " + out_path);
    std::cout << "wrote " << out_path << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GLCM texture features and window classification for grayscale imagery"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "texturemap 1.0.0");

  // extract ------------------------------------------------------------------
  auto* extract = app.add_subcommand("extract", "Tile an image and write a feature table");
  std::string ex_image;
  std::string ex_labels;
  std::string ex_out;
  ExtractionOptions ex_opts;
  double ex_purity = 0.6;
  bool ex_keep_unlabeled = false;
  int ex_threads = 0;
  extract->add_option("image", ex_image, "Input image (PNG, PGM, or PPM)")->required();
  extract->add_option("--labels", ex_labels, "Per-pixel class-id raster (PNG or PGM)");
  add_window_flag(extract, ex_opts);
  add_offset_flags(extract, ex_opts);
  extract->add_option("--purity", ex_purity, "Modal-class share required to label a window")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  extract->add_flag("--keep-unlabeled", ex_keep_unlabeled,
                    "Emit rows for windows below the purity threshold (label 255)");
  extract->add_option("--threads", ex_threads, "Worker threads (0 = machine parallelism)")
      ->check(CLI::Range(0, 4096))
      ->capture_default_str();
  extract->add_option("--out", ex_out, "Feature table to write")->required();
  add_config_flag(extract);
  extract->callback([&] {
    apply_config_file(extract);
    run_extract(ex_image, ex_labels, ex_opts, ex_purity, ex_keep_unlabeled, ex_threads, ex_out);
  });

  // train --------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Fit a classifier from labeled feature tables");
  std::vector<std::string> tr_tables;
  std::string tr_classes;
  std::string tr_out;
  ExtractionOptions tr_opts;
  ClassifierOptions tr_copts;
  train->add_option("tables", tr_tables, "Labeled feature tables")->required()->expected(-1);
  train->add_option("--classes", tr_classes, "Class map file (`id,name` per line)");
  CLI::Option* tr_window = add_window_flag(train, tr_opts);
  add_offset_flags(train, tr_opts);
  add_classifier_flags(train, tr_copts);
  train->add_option("--out", tr_out, "Model file to write")->required();
  add_config_flag(train);
  train->callback([&] {
    apply_config_file(train);
    run_train(tr_tables, tr_classes, tr_copts, tr_opts, tr_window->count() > 0, tr_out);
  });

  // predict ------------------------------------------------------------------
  auto* predict = app.add_subcommand("predict", "Classify every window of an image");
  std::string pr_model;
  std::string pr_image;
  std::string pr_labels;
  std::string pr_overlay;
  std::string pr_out;
  ExtractionOptions pr_opts;
  double pr_purity = 0.6;
  int pr_threads = 0;
  predict->add_option("model", pr_model, "Model file from `train`")->required();
  predict->add_option("image", pr_image, "Input image (PNG, PGM, or PPM)")->required();
  CLI::Option* pr_window = add_window_flag(predict, pr_opts);
  OffsetFlags pr_flags = add_offset_flags(predict, pr_opts);
  CLI::Option* pr_labels_opt =
      predict->add_option("--labels", pr_labels, "Ground-truth raster for scoring/overlay");
  predict->add_option("--overlay", pr_overlay, "Write a misclassification overlay PNG")
      ->needs(pr_labels_opt);
  predict->add_option("--purity", pr_purity, "Modal-class share required to label a window")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  predict->add_option("--threads", pr_threads, "Worker threads (0 = machine parallelism)")
      ->check(CLI::Range(0, 4096))
      ->capture_default_str();
  predict->add_option("--out", pr_out, "Prediction rows to write")->required();
  add_config_flag(predict);
  predict->callback([&] {
    apply_config_file(predict);
    run_predict(pr_model, pr_image, pr_out, pr_labels, pr_overlay, pr_purity, pr_threads,
                pr_opts, pr_window, pr_flags);
  });

  // evaluate -----------------------------------------------------------------
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate a classifier on a table");
  std::string ev_table;
  std::string ev_classes;
  std::string ev_out;
  ClassifierOptions ev_copts;
  int ev_folds = 5;
  evaluate->add_option("table", ev_table, "Labeled feature table")->required();
  evaluate->add_option("--classes", ev_classes, "Class map file (`id,name` per line)");
  add_classifier_flags(evaluate, ev_copts);
  evaluate->add_option("--folds", ev_folds, "Cross-validation folds")
      ->check(CLI::Range(2, 1 << 16))
      ->capture_default_str();
  evaluate->add_option("--out", ev_out, "Machine-readable report to write");
  add_config_flag(evaluate);
  evaluate->callback([&] {
    apply_config_file(evaluate);
    run_evaluate(ev_table, ev_classes, ev_copts, ev_folds, ev_out);
  });

  // bench --------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Time feature extraction per window size");
  std::string be_image;
  std::string be_out;
  std::vector<int> be_sizes = {50, 70};
  int be_repeats = 3;
  ExtractionOptions be_opts;
  bench->add_option("image", be_image, "Input image (PNG, PGM, or PPM)")->required();
  bench->add_option("--sizes", be_sizes, "Window sizes to time")
      ->delimiter(',')
      ->check(CLI::Range(2, 1 << 16));
  bench->add_option("--repeats", be_repeats, "Timing repetitions per size (median reported)")
      ->check(CLI::Range(1, 1 << 16))
      ->capture_default_str();
  add_offset_flags(bench, be_opts);
  bench->add_option("--out", be_out, "Write the report here instead of stdout");
  add_config_flag(bench);
  bench->callback([&] {
    apply_config_file(bench);
    run_bench(be_image, be_sizes, be_repeats, be_opts, be_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ComputeError& e) {
    std::cerr << "texturemap: error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "texturemap: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "texturemap: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
