#pragma once

// JSON encodings shared by the CLI and the tests.  Objects use sorted keys;
// rationals are "s/r" strings; W_n coefficients are numbers when they fit in
// 64 bits and decimal strings otherwise (both accepted on input).

#include "dieu/deformation.hpp"
#include "dieu/isocrystal.hpp"

#include "json.hpp"

#include <memory>

namespace dieu {

using Json = nlohmann::json;

/// Where fields come from: the builtin table or a loaded one.
struct FieldSource {
  std::shared_ptr<const FieldTable> table;
  FqField field(int p, int m) const;
  /// DIEU_FIELD_TABLE if set, else the builtin table.
  static FieldSource from_environment();
  static FieldSource from_file(const std::string& path);
};

Json to_json(const FqElement& x);
FqElement fq_from_json(const Json& j, const FieldSource& src);

Json ring_to_json(const WittRing& W);
WittRing ring_from_json(const Json& j, const FieldSource& src);

Json to_json(const WittElement& x);
/// Accepts the full object or, given a ring, a bare integer / coefficient list.
WittElement witt_from_json(const Json& j, const WittRing& W);

Json to_json(const RamifiedElement& x);
RamifiedElement ramified_from_json(const Json& j, const RamifiedRing& R);

/// {"ring": {...}, "h": h, "A": [[WittElement]]}
Json to_json(const WMatrix& A);
WMatrix matrix_from_json(const Json& j, const FieldSource& src);

/// {"ring": {..., "r": r}, "coeffs": [leading, ..., constant]}
Json to_json(const TwistedPoly& P);
TwistedPoly poly_from_json(const Json& j, const FieldSource& src);

Json to_json(const SlopeSequence& s);
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json to_json(const DeformedPresentation& d);
Json to_json(const TangentAction& t);

/// Twisted polynomial in F with coefficients in Z[p], e.g. "F^2 - (1+p)*F + p".
TwistedPoly parse_twisted_poly(const std::string& text, const WittRing& W);

}  // namespace dieu
