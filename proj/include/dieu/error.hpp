#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace dieu {

enum class ErrorCode {
  UnsupportedField,
  NoEmbedding,
  ExtensionExhausted,
  NotAUnit,
  OracleMismatch,
  InvalidSlopeData,
  RingMismatch,
  NotRankTwo,
  NotEllipticShape,
  InsufficientPrecision,
  NotReduced,
  DimensionMismatch,
  NotSuperspecialShape,
  OutOfRange,
  EvenPrime,
  InvalidModule,
  ParseError,
};

const char* to_string(ErrorCode code);

/// Every library failure is reported through this type. `detail` carries a
/// numeric payload where the error has one: the required precision for
/// InsufficientPrecision, the extension degree that would have been needed
/// for ExtensionExhausted.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::int64_t> detail = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::int64_t> detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::int64_t> detail_;
};

}  // namespace dieu
