#include <doctest.h>

#include <algorithm>

#include "kmetamodes/error.hpp"
#include "kmetamodes/schema.hpp"
#include "support/test_util.hpp"

using namespace kmm;

namespace {

std::vector<std::vector<std::string>> rows_from(std::initializer_list<std::vector<std::string>> r) {
  return {r};
}

}  // namespace

TEST_CASE("infer_schema: two-row classification") {
  const auto schema = infer_schema({"proto", "bytes"}, rows_from({{"tcp", "10"}, {"udp", "20"}}),
                                   DiscretizeConfig{});
  REQUIRE(schema.m() == 2);
  CHECK(schema.attributes[0].kind == AttributeSpec::Kind::categorical);
  CHECK(schema.attributes[0].category_ids.at("tcp") == 0);
  CHECK(schema.attributes[0].category_ids.at("udp") == 1);
  CHECK(schema.attributes[1].kind == AttributeSpec::Kind::numeric);
}

TEST_CASE("infer_schema: all-missing column stays categorical with only the missing token") {
  DiscretizeConfig config;
  config.missing_token = "?";
  const auto schema = infer_schema({"a", "b"}, rows_from({{"?", "1"}, {"?", "2"}}), config);
  const auto& attr = schema.attributes[0];
  CHECK(attr.kind == AttributeSpec::Kind::categorical);
  CHECK(attr.category_names.empty());
  CHECK(attr.missing_id() == 0);
  CHECK(attr.domain_size() == 2);
}

TEST_CASE("infer_schema: mixed parse makes the column categorical") {
  const auto schema =
      infer_schema({"x"}, rows_from({{"1"}, {"2"}, {"a"}}), DiscretizeConfig{});
  CHECK(schema.attributes[0].kind == AttributeSpec::Kind::categorical);
  CHECK(schema.attributes[0].category_names == std::vector<std::string>{"1", "2", "a"});
}

TEST_CASE("infer_schema: errors") {
  CHECK_THROWS_WITH_AS(infer_schema({}, rows_from({{"1"}}), DiscretizeConfig{}),
                       doctest::Contains("schema-error"), Error);
  CHECK_THROWS_WITH_AS(infer_schema({"a"}, {}, DiscretizeConfig{}),
                       doctest::Contains("schema-error"), Error);
  CHECK_THROWS_WITH_AS(infer_schema({"a", "a"}, rows_from({{"1", "2"}}), DiscretizeConfig{}),
                       doctest::Contains("duplicate"), Error);
  DiscretizeConfig config;
  config.label_column = "missing";
  CHECK_THROWS_AS(infer_schema({"a"}, rows_from({{"1"}}), config), Error);
}

TEST_CASE("infer_schema: label and excluded columns leave the attribute list") {
  DiscretizeConfig config;
  config.label_column = "label";
  config.exclude_columns = {"attack_cat"};
  const auto schema = infer_schema({"f1", "attack_cat", "label"},
                                   rows_from({{"x", "dos", "1"}, {"y", "", "0"}}), config);
  CHECK(schema.m() == 1);
  CHECK(schema.label_column == 2);
  CHECK(schema.ignored_columns == std::vector<std::size_t>{1});
  CHECK(schema.attributes[0].name == "f1");
}

TEST_CASE("fit_bins: quartiles of 1..100") {
  std::vector<double> values(100);
  for (int i = 0; i < 100; ++i) values[i] = i + 1;
  const auto edges = fit_bins(values, 4);
  REQUIRE(edges.size() == 3);
  CHECK(edges[0] == doctest::Approx(25.75).epsilon(1e-12));
  CHECK(edges[1] == doctest::Approx(50.5).epsilon(1e-12));
  CHECK(edges[2] == doctest::Approx(75.25).epsilon(1e-12));
}

TEST_CASE("fit_bins: constant column collapses to a single bin") {
  CHECK(fit_bins({5, 5, 5}, 10).empty());
}

TEST_CASE("fit_bins: duplicate quantiles collapse") {
  // Median of [0,0,0,1] under linear rank interpolation is 0.
  const auto edges = fit_bins({0, 0, 0, 1}, 2);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0] == 0.0);
}

TEST_CASE("fit_bins: errors") {
  CHECK_THROWS_WITH_AS(fit_bins({1.0}, 1), doctest::Contains("config-error"), Error);
  CHECK_THROWS_AS(fit_bins({}, 4), Error);
}

TEST_CASE("discretize_row: numeric binary search and categorical lookup") {
  Schema schema;
  schema.header = {"n", "c"};
  AttributeSpec numeric;
  numeric.name = "n";
  numeric.kind = AttributeSpec::Kind::numeric;
  numeric.source_column = 0;
  numeric.bin_edges = {25.75, 50.5, 75.25};
  AttributeSpec categorical;
  categorical.name = "c";
  categorical.kind = AttributeSpec::Kind::categorical;
  categorical.source_column = 1;
  categorical.category_names = {"tcp", "udp"};
  categorical.category_ids = {{"tcp", 0}, {"udp", 1}};
  schema.attributes = {numeric, categorical};

  std::vector<CategoryId> out;
  const std::vector<std::string> row1 = {"30", "tcp"};
  REQUIRE(discretize_row(row1, schema, out));
  CHECK(out[0] == 1);  // 25.75 < 30 <= 50.5
  CHECK(out[1] == 0);

  const std::vector<std::string> row2 = {"-10", "udp"};
  REQUIRE(discretize_row(row2, schema, out));
  CHECK(out[0] == 0);  // below the first edge clips down
  CHECK(out[1] == 1);

  const std::vector<std::string> row3 = {"1e9", "ftp"};
  REQUIRE(discretize_row(row3, schema, out));
  CHECK(out[0] == 3);  // above the last edge clips up
  CHECK(out[1] == categorical.unseen_id());

  const std::vector<std::string> row4 = {"", "tcp"};
  REQUIRE(discretize_row(row4, schema, out));
  CHECK(out[0] == numeric.missing_id());  // default missing token is ""

  const std::vector<std::string> bad = {"1", "tcp", "extra"};
  CHECK_FALSE(discretize_row(bad, schema, out));
}

TEST_CASE("discretize: monotone in the numeric value") {
  Rng rng(7);
  std::vector<double> values(200);
  for (auto& v : values) v = rng.unit() * 1000.0 - 500.0;
  const auto edges = fit_bins(values, 7);

  Schema schema;
  schema.header = {"n"};
  AttributeSpec attr;
  attr.name = "n";
  attr.kind = AttributeSpec::Kind::numeric;
  attr.bin_edges = edges;
  schema.attributes = {attr};

  std::vector<double> probes(500);
  for (auto& v : probes) v = rng.unit() * 1200.0 - 600.0;
  std::sort(probes.begin(), probes.end());
  std::vector<CategoryId> out;
  CategoryId prev = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const std::vector<std::string> row = {std::to_string(probes[i])};
    REQUIRE(discretize_row(row, schema, out));
    if (i > 0) CHECK(out[0] >= prev);
    CHECK(out[0] < attr.domain_size());
    prev = out[0];
  }
}

TEST_CASE("schema: ids stay inside the declared domain") {
  Rng rng(11);
  std::vector<std::vector<std::string>> rows;
  const char* cats[] = {"a", "b", "c", "d", "e"};
  for (int i = 0; i < 300; ++i) {
    rows.push_back({cats[rng.bounded(5)], std::to_string(rng.bounded(1000))});
  }
  const auto schema = infer_schema({"c", "n"}, rows, DiscretizeConfig{});
  std::vector<CategoryId> out;
  for (const auto& row : rows) {
    REQUIRE(discretize_row(row, schema, out));
    for (std::size_t j = 0; j < schema.m(); ++j) {
      CHECK(out[j] < schema.attributes[j].domain_size());
    }
  }
}

TEST_CASE("schema: serialization is deterministic and round-trips") {
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({i % 2 == 0 ? "x" : "y", std::to_string(i * 3 % 17), std::to_string(i % 2)});
  }
  DiscretizeConfig config;
  config.label_column = "label";
  const std::vector<std::string> header = {"c", "n", "label"};

  const auto schema1 = infer_schema(header, rows, config);
  const auto schema2 = infer_schema(header, rows, config);
  CHECK(schema1.to_json() == schema2.to_json());
  CHECK(schema1.hash() == schema2.hash());

  const auto parsed = Schema::from_json(schema1.to_json());
  CHECK(parsed == schema1);
  CHECK(parsed.to_json() == schema1.to_json());

  test::TempDir dir("schema");
  save_schema(schema1, dir.file("s.json"));
  CHECK(load_schema(dir.file("s.json")) == schema1);
}
