#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ipds {

// Error taxonomy shared by all modules. Everything derives from Error so
// callers can catch the whole family at the CLI boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct GenerationError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& msg, const std::string& origin, long line)
      : Error(origin + ":" + std::to_string(line) + ": " + msg), line_number(line) {}
  long line_number = 0;
};

struct DataError : Error {
  using Error::Error;
};

struct InputError : Error {
  using Error::Error;
};

struct StepSizeError : Error {
  using Error::Error;
};

struct NumericsError : Error {
  using Error::Error;
};

// Iteration cap reached before the requested tolerance; carries the best
// iterate found so far.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, std::vector<double> iterate, double value)
      : Error(msg), best_iterate(std::move(iterate)), best_value(value) {}
  std::vector<double> best_iterate;
  double best_value = 0.0;
};

}  // namespace ipds
