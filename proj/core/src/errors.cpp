#include "wqisa/errors.hpp"

namespace wqisa {

OutOfDomain::OutOfDomain(double x, double y, const std::string& what)
    : Error(what), x_(x), y_(y) {}

ZeroWeight::ZeroWeight(const std::string& what) : Error(what) {}

ZeroWeight::ZeroWeight(std::size_t i, std::size_t j, const std::string& what)
    : Error(what), has_index_(true), i_(i), j_(j) {}

namespace {

std::string with_line(std::size_t line, const std::string& what) {
  return line > 0 ? "line " + std::to_string(line) + ": " + what : what;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(with_line(line, what)), line_(line), detail_(what) {}

ParseError::ParseError(std::size_t line, const std::string& detail, const std::string& message)
    : Error(message), line_(line), detail_(detail) {}

ParseError ParseError::in_source(const std::string& source) const {
  return ParseError(line_, detail_, source + ": " + with_line(line_, detail_));
}

}  // namespace wqisa
