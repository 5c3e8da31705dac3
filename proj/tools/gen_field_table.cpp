// Regenerates the pinned Conway-polynomial table.
//   gen_field_table <max_p> <max_m> <out.json> <out.inc>

#include "dieu/fields.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  if (argc != 5) {
    std::cerr << "usage: gen_field_table <max_p> <max_m> <out.json> <out.inc>\n";
    return 2;
  }
  const auto table = dieu::FieldTable::compute(std::stoi(argv[1]), std::stoi(argv[2]));
  table.validate();
  std::ofstream(argv[3]) << table.to_json_text();
  std::ofstream inc(argv[4]);
  for (const auto& [key, f] : table.entries()) {
    inc << "    {" << key.first << ", " << key.second << ", {";
    for (std::size_t i = 0; i < f.size(); ++i) inc << (i ? ", " : "") << f[i];
    inc << "}},\n";
  }
  return 0;
}
