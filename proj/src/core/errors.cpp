#include "errors.hpp"

namespace coiso {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownCoordinate: return "UnknownCoordinate";
    case ErrorCode::ChartMismatch: return "ChartMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::BadDegree: return "BadDegree";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DependentFrame: return "DependentFrame";
    case ErrorCode::NoReebAtPoint: return "NoReebAtPoint";
    case ErrorCode::NotComplementary: return "NotComplementary";
    case ErrorCode::NotFoliatedForm: return "NotFoliatedForm";
    case ErrorCode::VerticalMismatch: return "VerticalMismatch";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotVanishingOnSection: return "NotVanishingOnSection";
    case ErrorCode::DegenerateAtPoint: return "DegenerateAtPoint";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

namespace {

std::string describe(std::size_t offset, const std::vector<std::string>& expected,
                     const std::string& found) {
  std::string msg = "at offset " + std::to_string(offset) + ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
    msg += expected[i];
  }
  msg += ", found " + (found.empty() ? std::string("end of input") : "'" + found + "'");
  return msg;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected,
                         const std::string& found)
    : Error(ErrorCode::SyntaxError, describe(offset, expected, found)),
      offset_(offset),
      expected_(std::move(expected)),
      found_(found) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace coiso
