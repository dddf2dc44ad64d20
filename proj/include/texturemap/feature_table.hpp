#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "texturemap/glcm.hpp"
#include "texturemap/image.hpp"

namespace texturemap {

/// One extracted window: its placement, the four features, and the ground
/// truth when available (kUnlabeled otherwise).
struct FeatureRow {
  WindowSpec window;
  FeatureVector features;
  int label = kUnlabeled;
};

struct FeatureTable {
  std::vector<FeatureRow> rows;
  bool has_labels = false;
};

/// Writes `origin_x,origin_y,size,homogeneity,contrast,energy,entropy[,label]`
/// rows after a matching header line. Reals carry 9 significant digits.
void write_feature_table(std::ostream& out, const FeatureTable& table);
void write_feature_table(const std::filesystem::path& path, const FeatureTable& table);

/// Parses a table produced by write_feature_table. Throws DataError on
/// malformed headers or rows.
FeatureTable read_feature_table(std::istream& in, const std::string& name = "<stream>");
FeatureTable read_feature_table(const std::filesystem::path& path);

}  // namespace texturemap
