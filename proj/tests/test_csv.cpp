#include <doctest.h>

#include <zlib.h>

#include "kmetamodes/csv.hpp"
#include "kmetamodes/error.hpp"
#include "support/test_util.hpp"

using namespace kmm;

namespace {

std::vector<std::vector<std::string>> read_all(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  while (reader.next(row)) rows.push_back(row);
  return rows;
}

}  // namespace

TEST_CASE("csv: plain rows, CRLF and trailing newline") {
  test::TempDir dir("csv");
  test::write_file(dir.file("a.csv"), "h1,h2\r\na,b\r\nc,d\n");
  const auto rows = read_all(dir.file("a.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"h1", "h2"});
  CHECK(rows[2] == std::vector<std::string>{"c", "d"});
}

TEST_CASE("csv: quoted fields with commas, quotes and newlines") {
  test::TempDir dir("csv");
  test::write_file(dir.file("q.csv"), "a,\"b,c\",\"say \"\"hi\"\"\"\n\"multi\nline\",x,\n");
  const auto rows = read_all(dir.file("q.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "say \"hi\""});
  CHECK(rows[1] == std::vector<std::string>{"multi\nline", "x", ""});
}

TEST_CASE("csv: empty cells and empty lines") {
  test::TempDir dir("csv");
  test::write_file(dir.file("e.csv"), ",x,\n\n\na,,b\n");
  const auto rows = read_all(dir.file("e.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"", "x", ""});
  CHECK(rows[1] == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("csv: BOM is stripped") {
  test::TempDir dir("csv");
  test::write_file(dir.file("b.csv"), "\xEF\xBB\xBFh1,h2\n1,2\n");
  const auto rows = read_all(dir.file("b.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "h1");
}

TEST_CASE("csv: gzip input is transparent") {
  test::TempDir dir("csv");
  const std::string path = dir.file("z.csv.gz");
  gzFile f = gzopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  const std::string body = "h1,h2\n1,two\n3,four\n";
  gzwrite(f, body.data(), static_cast<unsigned>(body.size()));
  gzclose(f);
  const auto rows = read_all(path);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1] == std::vector<std::string>{"1", "two"});
}

TEST_CASE("csv: missing file raises io error") {
  CHECK_THROWS_AS(CsvReader("/nonexistent/nope.csv"), Error);
}

TEST_CASE("csv: escape helper round-trips through the reader") {
  test::TempDir dir("csv");
  const std::vector<std::string> cells = {"plain", "with,comma", "with\"quote", "with\nnewline",
                                          ""};
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) line += ',';
    line += csv_escape(cells[i]);
  }
  test::write_file(dir.file("r.csv"), line + "\n");
  const auto rows = read_all(dir.file("r.csv"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == cells);
}
