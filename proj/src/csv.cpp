#include "kmetamodes/csv.hpp"

#include <zlib.h>

#include <array>
#include <cstring>

#include "kmetamodes/error.hpp"

namespace kmm {

struct CsvReader::Impl {
  gzFile file = nullptr;
  std::array<char, 1 << 16> buf{};
  int len = 0;
  int pos = 0;
  bool eof = false;
};

CsvReader::CsvReader(const std::string& path) : impl_(std::make_unique<Impl>()), path_(path) {
  impl_->file = gzopen(path.c_str(), "rb");
  if (impl_->file == nullptr) {
    raise(Errc::io, "cannot open " + path);
  }
  gzbuffer(impl_->file, 1 << 17);
}

CsvReader::~CsvReader() {
  if (impl_ && impl_->file != nullptr) gzclose(impl_->file);
}

int CsvReader::get() {
  Impl& s = *impl_;
  if (s.pos >= s.len) {
    if (s.eof) return -1;
    s.len = gzread(s.file, s.buf.data(), static_cast<unsigned>(s.buf.size()));
    if (s.len < 0) {
      int errnum = 0;
      const char* msg = gzerror(s.file, &errnum);
      raise(Errc::io, "read error in " + path_ + ": " + (msg != nullptr ? msg : "?"));
    }
    s.pos = 0;
    if (s.len == 0) {
      s.eof = true;
      return -1;
    }
  }
  return static_cast<unsigned char>(s.buf[s.pos++]);
}

int CsvReader::peek() {
  const int c = get();
  if (c >= 0) --impl_->pos;
  return c;
}

bool CsvReader::next(std::vector<std::string>& row) {
  row.clear();
  if (at_start_) {
    at_start_ = false;
    // Strip a UTF-8 BOM if present.
    if (peek() == 0xEF) {
      get();
      if (peek() == 0xBB) {
        get();
        if (peek() == 0xBF) {
          get();
        } else {
          raise(Errc::io, "bad byte sequence at start of " + path_);
        }
      } else {
        raise(Errc::io, "bad byte sequence at start of " + path_);
      }
    }
  }

  // Skip empty lines (including the trailing newline of the file).
  int c = get();
  while (c == '\n' || c == '\r') c = get();
  if (c < 0) return false;

  std::string field;
  bool in_quotes = false;
  bool row_done = false;
  if (c == '"') {
    in_quotes = true;
  } else if (c == ',') {
    row.emplace_back();
  } else {
    field.push_back(static_cast<char>(c));
  }

  while (!row_done) {
    c = get();
    if (in_quotes) {
      if (c < 0) {
        row_done = true;  // unterminated quote: take what we have
      } else if (c == '"') {
        if (peek() == '"') {
          get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(static_cast<char>(c));
      }
      continue;
    }
    if (c < 0 || c == '\n') {
      row_done = true;
    } else if (c == '\r') {
      if (peek() == '\n') get();
      row_done = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      if (peek() == '"') {
        get();
        in_quotes = true;
      }
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
    } else {
      field.push_back(static_cast<char>(c));
    }
  }
  row.push_back(std::move(field));
  ++rows_read_;
  return true;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace kmm
