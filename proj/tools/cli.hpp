#pragma once

// Command-line front end.  `dispatch` is the whole program minus process
// plumbing, so tests can drive it with in-memory streams.

#include "dieu/json_io.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dieu::cli {

enum class OutputFormat { Json, Table };

struct Config {
  int default_precision = 8;
  std::string field_table;  // empty: DIEU_FIELD_TABLE, then the builtin table
  int threads = 1;
  OutputFormat output = OutputFormat::Json;
};

enum ExitCode { kOk = 0, kCheckFailed = 1, kInvalidInput = 2, kNeedPrecision = 3 };

/// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Indented "key: value" rendering of a JSON report.
std::string render_table(const Json& j);

/// Single-line JSON with sorted keys; the byte-stable form the CLI prints.
std::string render_json(const Json& j);

}  // namespace dieu::cli
