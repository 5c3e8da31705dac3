#include "dieu/error.hpp"
#include "dieu/rational.hpp"

#include <cctype>

namespace dieu {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::NoEmbedding: return "NoEmbedding";
    case ErrorCode::ExtensionExhausted: return "ExtensionExhausted";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::InvalidSlopeData: return "InvalidSlopeData";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::NotRankTwo: return "NotRankTwo";
    case ErrorCode::NotEllipticShape: return "NotEllipticShape";
    case ErrorCode::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorCode::NotReduced: return "NotReduced";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSuperspecialShape: return "NotSuperspecialShape";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EvenPrime: return "EvenPrime";
    case ErrorCode::InvalidModule: return "InvalidModule";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      std::int64_t v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(v);
    }
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    std::int64_t a = std::stoll(num, &used);
    if (used != num.size()) throw std::invalid_argument(text);
    std::int64_t b = std::stoll(den, &used);
    if (used != den.size() || b == 0) throw std::invalid_argument(text);
    return Rational(a, b);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "not a rational: '" + text + "'");
  }
}

Rational frac_part(const Rational& q) {
  std::int64_t n = q.numerator(), d = q.denominator();
  std::int64_t r = ((n % d) + d) % d;
  return Rational(r, d);
}

}  // namespace dieu
