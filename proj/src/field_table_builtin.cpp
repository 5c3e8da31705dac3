#include "dieu/fields.hpp"

namespace dieu {

namespace {

struct Row {
  int p;
  int m;
  std::vector<int> coeffs;
};

// Generated by tools/gen_field_table; mirrors data/field_table.json.
const std::vector<Row>& rows() {
  static const std::vector<Row> data = {
#include "field_table_data.inc"
  };
  return data;
}

}  // namespace

const FieldTable& FieldTable::builtin() {
  static const FieldTable table = [] {
    std::map<std::pair<int, int>, std::vector<int>> moduli;
    for (const auto& r : rows()) moduli[{r.p, r.m}] = r.coeffs;
    return FieldTable(std::move(moduli));
  }();
  return table;
}

}  // namespace dieu
