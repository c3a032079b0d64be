// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satprec/types.hpp"

namespace satprec {

struct ModcodRow {
  std::string mode;
  double efficiency_bps = 0.0;     // info bits per symbol
  double required_sinr_db = 0.0;
};

// DVB-S2X ACM lookup: the highest efficiency whose required SINR is met,
// 0 below the lowest threshold. Rows are kept sorted by required SINR with a
// running efficiency maximum, so dominated modes never win.
class ModcodTable {
 public:
  ModcodTable();  // the built-in 31-mode table
  explicit ModcodTable(std::vector<ModcodRow> rows);

  static ModcodTable from_csv(const std::string& path);
  void write_csv(const std::string& path) const;

  double efficiency(double sinr_db) const;
  const std::vector<ModcodRow>& rows() const { return rows_; }

  // FNV-1a over the canonical "mode,efficiency,required" serialization.
  std::uint64_t checksum() const;

 private:
  void build_index();
  std::vector<ModcodRow> rows_;      // sorted by required SINR ascending
  std::vector<double> best_below_;   // running max efficiency
};

}  // namespace satprec
