#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace kmm {

// RFC 4180 CSV reader. Quoted fields may contain commas, doubled quotes and
// embedded newlines; rows end at LF or CRLF. Input may be plain or gzip
// (zlib sniffs the magic bytes). Completely empty lines are skipped.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path);
  ~CsvReader();
  CsvReader(const CsvReader&) = delete;
  CsvReader& operator=(const CsvReader&) = delete;

  // Reads one row into `row` (cleared first). Returns false at end of input.
  bool next(std::vector<std::string>& row);

  std::size_t rows_read() const { return rows_read_; }
  const std::string& path() const { return path_; }

 private:
  int get();   // next byte or -1 at EOF
  int peek();

  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string path_;
  std::size_t rows_read_ = 0;
  bool at_start_ = true;
};

// One-field escape helper for CSV writers; quotes only when needed.
std::string csv_escape(const std::string& field);

}  // namespace kmm
