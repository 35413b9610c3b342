#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace coiso {

enum class ErrorCode {
  SyntaxError,
  UnknownCoordinate,
  ChartMismatch,
  DimensionMismatch,
  DegreeZero,
  BadDegree,
  IndexOutOfRange,
  DependentFrame,
  NoReebAtPoint,
  NotComplementary,
  NotFoliatedForm,
  VerticalMismatch,
  NotClosed,
  NotVanishingOnSection,
  DegenerateAtPoint,
  NonFiniteState,
  InvalidInput,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure; `offset` is a byte offset into the text handed to the parser.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
  std::string found_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace coiso
