#pragma once

#include <stdexcept>
#include <string>

namespace kmm {

// Error classes; each maps to a distinct CLI exit code.
enum class Errc : int {
  schema = 2,
  config = 3,
  model = 4,
  distance = 5,
  init = 6,
  sampling = 7,
  scoring = 8,
  metric = 9,
  ingest = 10,
  io = 11,
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::schema: return "schema-error";
    case Errc::config: return "config-error";
    case Errc::model: return "model-error";
    case Errc::distance: return "distance-error";
    case Errc::init: return "init-error";
    case Errc::sampling: return "sampling-error";
    case Errc::scoring: return "scoring-error";
    case Errc::metric: return "metric-error";
    case Errc::ingest: return "ingest-error";
    case Errc::io: return "io-error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace kmm
