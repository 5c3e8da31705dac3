#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace dieu {

using Rational = boost::rational<std::int64_t>;

/// "s/r" in lowest terms; integers are written without a denominator.
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

/// Representative of q mod 1 in [0, 1).
Rational frac_part(const Rational& q);

}  // namespace dieu
