#pragma once

#include <stdexcept>
#include <string>

namespace shiftgame {

// Failure taxonomy. "insufficient_data" is distinct from a bot (no-value)
// result: bot is a successful decode that found no common witness.
enum class ErrorKind {
  usage,
  precondition,
  budget,
  capacity,
  insufficient_data,
  search_exhausted,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::budget: return "budget";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::search_exhausted: return "search-exhausted";
  }
  return "?";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, std::string(error_kind_name(kind)) + ": " + msg);
}

}  // namespace shiftgame
