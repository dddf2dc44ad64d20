#include "texturemap/feature_table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "texturemap/error.hpp"

namespace texturemap {

namespace {

constexpr const char* kHeaderUnlabeled = "origin_x,origin_y,size,homogeneity,contrast,energy,entropy";
constexpr const char* kHeaderLabeled =
    "origin_x,origin_y,size,homogeneity,contrast,energy,entropy,label";

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

void write_feature_table(std::ostream& out, const FeatureTable& table) {
  out << (table.has_labels ? kHeaderLabeled : kHeaderUnlabeled) << "\n";
  for (const FeatureRow& row : table.rows) {
    out << row.window.x << ',' << row.window.y << ',' << row.window.size << ','
        << format_real(row.features.homogeneity) << ',' << format_real(row.features.contrast)
        << ',' << format_real(row.features.energy) << ',' << format_real(row.features.entropy);
    if (table.has_labels) {
      out << ',' << row.label;
    }
    out << "\n";
  }
}

void write_feature_table(const std::filesystem::path& path, const FeatureTable& table) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open file for writing: " + path.string());
  }
  write_feature_table(out, table);
  if (!out) {
    throw IoError("failed to write feature table: " + path.string());
  }
}

FeatureTable read_feature_table(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty feature table: " + name);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  FeatureTable table;
  if (line == kHeaderLabeled) {
    table.has_labels = true;
  } else if (line == kHeaderUnlabeled) {
    table.has_labels = false;
  } else {
    throw DataError("unrecognized feature table header: " + name);
  }

  const std::size_t expected = table.has_labels ? 8 : 7;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != expected) {
      throw DataError("feature table row " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields (want " +
                      std::to_string(expected) + "): " + name);
    }
    try {
      FeatureRow row;
      row.window.x = std::stoi(fields[0]);
      row.window.y = std::stoi(fields[1]);
      row.window.size = std::stoi(fields[2]);
      row.features.homogeneity = std::stod(fields[3]);
      row.features.contrast = std::stod(fields[4]);
      row.features.energy = std::stod(fields[5]);
      row.features.entropy = std::stod(fields[6]);
      if (table.has_labels) {
        row.label = std::stoi(fields[7]);
        if (row.label < 0 || row.label > kUnlabeled) {
          throw std::out_of_range("label");
        }
      }
      table.rows.push_back(row);
    } catch (const std::exception&) {
      throw DataError("feature table row " + std::to_string(line_no) + " is malformed: " + name);
    }
  }
  return table;
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open file: " + path.string());
  }
  return read_feature_table(in, path.string());
}

}  // namespace texturemap
