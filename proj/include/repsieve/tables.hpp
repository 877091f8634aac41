#pragma once

#include <string>
#include <vector>

#include "repsieve/modular.hpp"

namespace repsieve {

struct TableRow {
  int row = 0;
  Residue modulus = 0;
  std::vector<Residue> residues;  // one period, from n = 0
  std::size_t period = 0;
  /// Table 4 only: residues taken by products of two or more consecutive terms.
  std::vector<Residue> product_residues;
};

struct ResidueTable {
  int number = 0;
  std::string caption;
  std::vector<TableRow> rows;
};

/// Tables 1-4: balancing residues, balancing pair products, Lucas-balancing
/// residues, and Lucas-balancing residues with their window-product sets.
ResidueTable residue_table(int which);

std::string render_tsv(const ResidueTable& table);
std::string render_human(const ResidueTable& table);

}  // namespace repsieve
