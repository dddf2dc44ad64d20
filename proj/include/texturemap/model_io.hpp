#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "texturemap/classifiers.hpp"
#include "texturemap/glcm.hpp"

namespace texturemap {

/// Extraction settings a model was trained with. Stored alongside the model
/// so prediction can refuse inputs produced under different settings.
struct ModelMetadata {
  int levels = 8;
  int window = 50;
  OffsetSpec offset;

  bool operator==(const ModelMetadata&) const = default;
};

/// A trained classifier plus the extraction settings it expects.
struct StoredModel {
  ModelMetadata meta;
  std::variant<NbModel, SvmModel> model;

  bool is_svm() const { return std::holds_alternative<SvmModel>(model); }
  const ClassMap& classes() const;
  int predict(const FeatureVector& x) const;
};

/// Versioned line-oriented text format. Header line `texturemap-model v1
/// <nb|svm>`, then extraction metadata, the frozen feature order, the class
/// map, and the classifier body. Reals use 17 significant digits so a
/// write/read roundtrip reproduces the model bit for bit.
void write_model(std::ostream& out, const StoredModel& stored);
void write_model(const std::filesystem::path& path, const StoredModel& stored);

StoredModel read_model(std::istream& in, const std::string& name = "<stream>");
StoredModel read_model(const std::filesystem::path& path);

}  // namespace texturemap
