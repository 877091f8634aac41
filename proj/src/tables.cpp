#include "repsieve/tables.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace repsieve {

namespace {

std::string join(const std::vector<Residue>& values, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? sep : "") << values[i];
  return os.str();
}

TableRow cycle_row(int row, const ResidueCycle& cycle) {
  return {row, cycle.modulus, cycle.values, cycle.period(), {}};
}

}  // namespace

ResidueTable residue_table(int which) {
  ResidueTable table;
  table.number = which;
  int row = 0;
  switch (which) {
    case 1:
      table.caption = "B_n mod m";
      for (Residue q : {3, 4, 5, 7, 8, 9, 11, 20}) table.rows.push_back(cycle_row(++row, residue_cycle(balancing(), q)));
      break;
    case 2:
      table.caption = "B_n B_{n+1} mod m";
      for (Residue q : {5, 100}) {
        table.rows.push_back(cycle_row(++row, product_residue_cycle(balancing(), 1, q)));
      }
      break;
    case 3:
      table.caption = "C_n mod m";
      for (Residue q : {5, 7, 8}) table.rows.push_back(cycle_row(++row, residue_cycle(lucas_balancing(), q)));
      break;
    case 4:
      table.caption = "C_n mod m and C_n C_{n+1} ... C_{n+k} mod m";
      for (Residue q : {5, 7, 8}) {
        TableRow r = cycle_row(++row, residue_cycle(lucas_balancing(), q));
        std::set<Residue> all;
        for (const auto& cls : window_closure(lucas_balancing(), 1, q).classes) all.insert(cls.begin(), cls.end());
        r.product_residues.assign(all.begin(), all.end());
        table.rows.push_back(std::move(r));
      }
      break;
    default:
      throw std::invalid_argument("tables are numbered 1 to 4");
  }
  return table;
}

std::string render_tsv(const ResidueTable& table) {
  std::ostringstream os;
  os << "table\trow\tmodulus\tresidues\tperiod";
  if (table.number == 4) os << "\tproduct_residues";
  os << '\n';
  for (const auto& r : table.rows) {
    os << table.number << '\t' << r.row << '\t' << r.modulus << '\t' << join(r.residues, ",") << '\t'
       << r.period;
    if (table.number == 4) os << '\t' << join(r.product_residues, ",");
    os << '\n';
  }
  return os.str();
}

std::string render_human(const ResidueTable& table) {
  std::ostringstream os;
  os << "Table " << table.number << ": " << table.caption << '\n';
  for (const auto& r : table.rows) {
    os << "  " << r.row << ".  m = " << r.modulus << "  [" << join(r.residues, ", ") << "]  period "
       << r.period;
    if (table.number == 4) os << "  products in {" << join(r.product_residues, ", ") << "}";
    os << '\n';
  }
  return os.str();
}

}  // namespace repsieve
