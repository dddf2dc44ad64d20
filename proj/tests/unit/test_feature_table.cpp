#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"

#include "temp_dir.hpp"
#include "texturemap/error.hpp"
#include "texturemap/feature_table.hpp"

using namespace texturemap;
using testsupport::TempDir;

namespace {

FeatureTable random_table(unsigned seed, bool labeled, int rows) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wide(0.0, 49.0);
  std::uniform_int_distribution<int> origin(0, 4000);
  std::uniform_int_distribution<int> label(0, 5);

  FeatureTable table;
  table.has_labels = labeled;
  for (int i = 0; i < rows; ++i) {
    FeatureRow row;
    row.window = WindowSpec{origin(rng), origin(rng), 50};
    row.features = FeatureVector{unit(rng), wide(rng), unit(rng), unit(rng) * 4.0};
    if (labeled) row.label = label(rng);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace

TEST_SUITE_BEGIN("feature_table");

TEST_CASE("header line spells out the column order") {
  FeatureTable table;
  table.rows.push_back(FeatureRow{WindowSpec{0, 50, 50}, FeatureVector{0.5, 1.25, 0.125, 0.75}});

  std::ostringstream out;
  write_feature_table(out, table);
  CHECK(out.str() ==
        "origin_x,origin_y,size,homogeneity,contrast,energy,entropy\n"
        "0,50,50,0.5,1.25,0.125,0.75\n");

  table.has_labels = true;
  table.rows[0].label = 2;
  std::ostringstream labeled;
  write_feature_table(labeled, table);
  CHECK(labeled.str() ==
        "origin_x,origin_y,size,homogeneity,contrast,energy,entropy,label\n"
        "0,50,50,0.5,1.25,0.125,0.75,2\n");
}

TEST_CASE("round trip preserves placements, labels, and 9 significant digits") {
  for (bool labeled : {false, true}) {
    CAPTURE(labeled);
    const FeatureTable table = random_table(labeled ? 21u : 20u, labeled, 300);

    std::stringstream io;
    write_feature_table(io, table);
    const FeatureTable back = read_feature_table(io, "roundtrip");

    REQUIRE(back.has_labels == labeled);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const FeatureRow& a = table.rows[i];
      const FeatureRow& b = back.rows[i];
      REQUIRE(a.window == b.window);
      REQUIRE(a.label == b.label);
      const auto av = a.features.values();
      const auto bv = b.features.values();
      for (int f = 0; f < kFeatureCount; ++f) {
        REQUIRE(bv[f] == doctest::Approx(av[f]).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("file round trip and unlabeled default") {
  TempDir dir;
  const auto path = dir.file("windows.csv");
  const FeatureTable table = random_table(7, false, 25);
  write_feature_table(path, table);
  const FeatureTable back = read_feature_table(path);
  REQUIRE(back.rows.size() == 25);
  CHECK_FALSE(back.has_labels);
  for (const FeatureRow& row : back.rows) CHECK(row.label == kUnlabeled);
}

TEST_CASE("header-only tables parse as empty") {
  std::istringstream in("origin_x,origin_y,size,homogeneity,contrast,energy,entropy,label\n");
  const FeatureTable table = read_feature_table(in, "empty");
  CHECK(table.has_labels);
  CHECK(table.rows.empty());
}

TEST_CASE("carriage returns and trailing blank lines are tolerated") {
  std::istringstream in(
      "origin_x,origin_y,size,homogeneity,contrast,energy,entropy\r\n"
      "0,0,50,0.5,1,0.25,0.3\r\n"
      "\n");
  const FeatureTable table = read_feature_table(in, "crlf");
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].features.contrast == 1.0);
}

TEST_CASE("malformed inputs raise data errors naming the source") {
  SUBCASE("empty stream") {
    std::istringstream in("");
    CHECK_THROWS_WITH_AS(read_feature_table(in, "src.csv"), doctest::Contains("src.csv"),
                         DataError);
  }

  SUBCASE("unknown header") {
    std::istringstream in("x,y,w,h\n");
    CHECK_THROWS_WITH_AS(read_feature_table(in, "src.csv"),
                         doctest::Contains("unrecognized feature table header"), DataError);
  }

  SUBCASE("wrong field count") {
    std::istringstream in(
        "origin_x,origin_y,size,homogeneity,contrast,energy,entropy\n"
        "0,0,50,0.5,1,0.25\n");
    CHECK_THROWS_AS(read_feature_table(in, "src.csv"), DataError);
  }

  SUBCASE("non-numeric feature") {
    std::istringstream in(
        "origin_x,origin_y,size,homogeneity,contrast,energy,entropy\n"
        "0,0,50,high,1,0.25,0.3\n");
    CHECK_THROWS_AS(read_feature_table(in, "src.csv"), DataError);
  }

  SUBCASE("label out of range") {
    std::istringstream in(
        "origin_x,origin_y,size,homogeneity,contrast,energy,entropy,label\n"
        "0,0,50,0.5,1,0.25,0.3,-1\n");
    CHECK_THROWS_AS(read_feature_table(in, "src.csv"), DataError);
    std::istringstream high(
        "origin_x,origin_y,size,homogeneity,contrast,energy,entropy,label\n"
        "0,0,50,0.5,1,0.25,0.3,300\n");
    CHECK_THROWS_AS(read_feature_table(high, "src.csv"), DataError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_feature_table(std::filesystem::path("/nonexistent/table.csv")), IoError);
  }
}

TEST_SUITE_END();
