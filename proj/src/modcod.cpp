// SPDX-License-Identifier: Apache-2.0
#include "satprec/modcod.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace satprec {

namespace {

// DVB-S2X normative MODCODs used for ACM at PER 1e-6, required SINR with
// approximate implementation losses.
const std::vector<ModcodRow>& builtin_rows() {
  static const std::vector<ModcodRow> rows = {
      {"QPSK_2/9", 0.434, -2.85},      {"QPSK_13/45", 0.567, -2.03},
      {"QPSK_9/20", 0.889, 0.22},      {"QPSK_11/20", 1.088, 1.45},
      {"8APSK_5/9-L", 1.647, 4.73},    {"8APSK_26/45-L", 1.713, 5.13},
      {"8PSK_23/36", 1.896, 6.12},     {"8PSK_25/36", 2.062, 7.02},
      {"8PSK_13/18", 2.145, 7.49},     {"16APSK_1/2-L", 1.972, 5.97},
      {"16APSK_8/15-L", 2.104, 6.55},  {"16APSK_5/9-L", 2.193, 6.84},
      {"16APSK_26/45", 2.281, 7.51},   {"16APSK_3/5", 2.370, 7.80},
      {"16APSK_3/5-L", 2.370, 7.41},   {"16APSK_28/45", 2.458, 8.10},
      {"16APSK_23/36", 2.524, 8.38},   {"16APSK_2/3-L", 2.635, 8.43},
      {"16APSK_25/36", 2.745, 9.27},   {"16APSK_13/18", 2.856, 9.71},
      {"16APSK_7/9", 3.077, 10.65},    {"16APSK_77/90", 3.386, 11.99},
      {"32APSK_2/3-L", 3.289, 11.10},  {"32APSK_32/45", 3.510, 11.75},
      {"32APSK_7/9", 3.841, 13.05},    {"64APSK_32/45-L", 4.206, 13.98},
      {"64APSK_11/15", 4.338, 14.81},  {"64APSK_7/9", 4.603, 15.47},
      {"64APSK_4/5", 4.735, 15.87},    {"64APSK_5/6", 4.933, 16.55},
      {"128APSK_3/4", 5.163, 17.73},
  };
  return rows;
}

}  // namespace

ModcodTable::ModcodTable() : rows_(builtin_rows()) { build_index(); }

ModcodTable::ModcodTable(std::vector<ModcodRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("ModcodTable: empty table");
  build_index();
}

void ModcodTable::build_index() {
  std::stable_sort(rows_.begin(), rows_.end(), [](const ModcodRow& a, const ModcodRow& b) {
    return a.required_sinr_db < b.required_sinr_db;
  });
  best_below_.resize(rows_.size());
  double best = 0.0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    best = std::max(best, rows_[i].efficiency_bps);
    best_below_[i] = best;
  }
}

double ModcodTable::efficiency(double sinr_db) const {
  // last row with required <= sinr_db
  auto it = std::upper_bound(rows_.begin(), rows_.end(), sinr_db,
                             [](double v, const ModcodRow& r) { return v < r.required_sinr_db; });
  if (it == rows_.begin()) return 0.0;
  return best_below_[static_cast<std::size_t>(std::distance(rows_.begin(), it)) - 1];
}

ModcodTable ModcodTable::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("modcod: cannot open " + path);
  std::vector<ModcodRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("mode,", 0) == 0) continue;  // optional header line
    }
    std::stringstream ss(line);
    ModcodRow row;
    std::string eff, req;
    if (!std::getline(ss, row.mode, ',') || !std::getline(ss, eff, ',') || !std::getline(ss, req)) {
      throw std::runtime_error("modcod: malformed row: " + line);
    }
    try {
      row.efficiency_bps = std::stod(eff);
      row.required_sinr_db = std::stod(req);
    } catch (const std::exception&) {
      throw std::runtime_error("modcod: malformed numeric field: " + line);
    }
    rows.push_back(std::move(row));
  }
  return ModcodTable(std::move(rows));
}

void ModcodTable::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("modcod: cannot write " + path);
  out << "mode,efficiency_bps,required_sinr_db\n";
  char buf[128];
  for (const auto& r : rows_) {
    std::snprintf(buf, sizeof(buf), "%s,%.3f,%.2f\n", r.mode.c_str(), r.efficiency_bps,
                  r.required_sinr_db);
    out << buf;
  }
}

std::uint64_t ModcodTable::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  char buf[128];
  for (const auto& r : rows_) {
    std::snprintf(buf, sizeof(buf), "%s,%.3f,%.2f;", r.mode.c_str(), r.efficiency_bps,
                  r.required_sinr_db);
    mix(buf);
  }
  return h;
}

}  // namespace satprec
