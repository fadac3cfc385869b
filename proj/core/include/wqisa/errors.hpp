#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wqisa {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad degree, empty input, k out of range, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// An evaluation point lies outside the closed domain rectangle of a spline space.
class OutOfDomain : public Error {
public:
  OutOfDomain(double x, double y, const std::string& what);
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

private:
  double x_;
  double y_;
};

/// The weights of a control-point estimate summed to zero, so the estimate is undefined.
/// Carries the coefficient index when raised while estimating a whole grid.
class ZeroWeight : public Error {
public:
  explicit ZeroWeight(const std::string& what);
  ZeroWeight(std::size_t i, std::size_t j, const std::string& what);

  bool has_index() const noexcept { return has_index_; }
  std::size_t i() const noexcept { return i_; }
  std::size_t j() const noexcept { return j_; }

private:
  bool has_index_ = false;
  std::size_t i_ = 0;
  std::size_t j_ = 0;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  /// The message without source or line prefix.
  const std::string& detail() const noexcept { return detail_; }
  /// Same error, reported as coming from `source`.
  ParseError in_source(const std::string& source) const;

private:
  ParseError(std::size_t line, const std::string& detail, const std::string& message);

  std::size_t line_;
  std::string detail_;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace wqisa
