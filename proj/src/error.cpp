#include "pgml/error.hpp"

namespace pgml {

namespace {

std::string with_line(const std::string& what, std::optional<std::size_t> line) {
  if (!line) return what;
  return "line " + std::to_string(*line) + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::optional<std::size_t> line)
    : Error(with_line(what, line)), line_(line) {}

DivergenceError::DivergenceError(const std::string& what, std::size_t epoch)
    : NumericalError(what), epoch_(epoch) {}

}  // namespace pgml
