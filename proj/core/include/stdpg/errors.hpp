#ifndef STDPG_ERRORS_HPP
#define STDPG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stdpg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A row of an input file failed schema or range validation.
struct MalformedRow : Error {
  MalformedRow(std::size_t line_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
  std::size_t line;
};

struct EmptyFile : Error {
  using Error::Error;
};

// A time window contains zero cases; callers skip the window.
struct EmptyWindow : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct DegenerateError : Error {
  using Error::Error;
};

struct EmptyTrace : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct ChainDiverged : Error {
  using Error::Error;
};

// Rejection sampler acceptance rate fell below its floor.
struct RejectionStall : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Invalid configuration; the CLI maps this to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace stdpg

#endif  // STDPG_ERRORS_HPP
