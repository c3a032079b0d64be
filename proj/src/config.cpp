// SPDX-License-Identifier: Apache-2.0
#include "satprec/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace satprec {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "satellite.longitude_deg", "coverage.center_lon_deg", "coverage.center_lat_deg",
      "beams.count", "beams.grid_spacing_deg", "feeds.per_beam", "clusters.size",
      "rain.mean_db", "rain.sigma_db", "rain.clear_sky",
      "rf.carrier_hz", "rf.bandwidth_hz", "rf.noise_temp_k", "rf.user_gain_dbi",
      "pattern.peak_gain_dbi", "pattern.theta3db_factor", "pattern.theta3db_deg",
      "cooperation", "precoder.flavor", "precoder.mmse_reg",
      "feeder.rho", "feeder.num_interferers", "feeder.known_at_gateway",
      "csi.quantized", "csi.max_feeds",
      "run.power_dbw", "run.drops", "run.seed",
  };
  return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
  KeyValueConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: malformed line " + std::to_string(lineno) + ": " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config: empty key or value at line " + std::to_string(lineno));
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key " + key + " is not a number: " + it->second);
  }
}

Index KeyValueConfig::get_index(const std::string& key, Index fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("");
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key " + key + " is not an integer: " + it->second);
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: key " + key + " is not a boolean: " + it->second);
}

CooperationKind scenario_kind(Index scenario, Index& group_size) {
  group_size = 0;
  switch (scenario) {
    case 1: return CooperationKind::Icm;
    case 2: group_size = 4; return CooperationKind::GroupCollab;
    case 3: group_size = 7; return CooperationKind::GroupCollab;
    case 4: return CooperationKind::Gcm;
    case 5: return CooperationKind::SingleGatewayRef;
    case 6: return CooperationKind::Lmc;
    default: throw std::invalid_argument("scenario must be in 1..6");
  }
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& kv) {
  for (const auto& [key, value] : kv.values()) {
    if (!known_keys().count(key)) {
      throw std::invalid_argument("config: unknown key: " + key);
    }
  }
  ExperimentConfig c;
  c.num_beams = kv.get_index("beams.count", c.num_beams);
  c.cluster_size = kv.get_index("clusters.size", c.cluster_size);
  c.feeds_per_beam = kv.get_double("feeds.per_beam", c.feeds_per_beam);
  c.beam_spacing_deg = kv.get_double("beams.grid_spacing_deg", c.beam_spacing_deg);

  c.geometry.satellite_longitude_deg =
      kv.get_double("satellite.longitude_deg", c.geometry.satellite_longitude_deg);
  c.geometry.coverage_center_lonlat.x() =
      kv.get_double("coverage.center_lon_deg", c.geometry.coverage_center_lonlat.x());
  c.geometry.coverage_center_lonlat.y() =
      kv.get_double("coverage.center_lat_deg", c.geometry.coverage_center_lonlat.y());
  c.geometry.beam_spacing_deg = c.beam_spacing_deg;
  c.geometry.carrier_hz = kv.get_double("rf.carrier_hz", c.geometry.carrier_hz);
  c.geometry.bandwidth_hz = kv.get_double("rf.bandwidth_hz", c.geometry.bandwidth_hz);
  c.geometry.noise_temp_k = kv.get_double("rf.noise_temp_k", c.geometry.noise_temp_k);
  c.geometry.user_gain_dbi = kv.get_double("rf.user_gain_dbi", c.geometry.user_gain_dbi);
  c.geometry.feed_peak_gain_dbi = kv.get_double("pattern.peak_gain_dbi", c.geometry.feed_peak_gain_dbi);
  c.geometry.theta3db_factor = kv.get_double("pattern.theta3db_factor", c.geometry.theta3db_factor);
  c.geometry.theta3db_deg = kv.get_double("pattern.theta3db_deg", c.geometry.theta3db_deg);

  c.rain.mean_db = kv.get_double("rain.mean_db", c.rain.mean_db);
  c.rain.sigma_db = kv.get_double("rain.sigma_db", c.rain.sigma_db);
  c.rain.clear_sky = kv.get_bool("rain.clear_sky", c.rain.clear_sky);

  const std::string coop = kv.get_string("cooperation", "gcm");
  c.cooperation = parse_cooperation(coop);
  if (c.cooperation == CooperationKind::GroupCollab) {
    c.group_size = coop == "4gc" ? 4 : 7;
  }

  const std::string flavor = kv.get_string("precoder.flavor", "mmse");
  if (flavor == "zf") {
    c.flavor = PrecoderFlavor::Zf;
  } else if (flavor == "mmse") {
    c.flavor = PrecoderFlavor::Mmse;
  } else {
    throw std::invalid_argument("config: precoder.flavor must be zf or mmse");
  }
  const std::string reg = kv.get_string("precoder.mmse_reg", "scaled");
  if (reg == "scaled") {
    c.mmse_reg = MmseRegMode::Scaled;
  } else if (reg == "g_over_p") {
    c.mmse_reg = MmseRegMode::GOverP;
  } else if (reg == "paper_literal") {
    c.mmse_reg = MmseRegMode::PaperLiteral;
  } else {
    throw std::invalid_argument("config: precoder.mmse_reg must be scaled, g_over_p or paper_literal");
  }

  c.feeder.rho = kv.get_double("feeder.rho", c.feeder.rho);
  c.feeder.num_interferers = kv.get_index("feeder.num_interferers", c.feeder.num_interferers);
  c.feeder_known_at_gateway = kv.get_bool("feeder.known_at_gateway", c.feeder_known_at_gateway);
  c.csi_quantized = kv.get_bool("csi.quantized", c.csi_quantized);
  c.csi_max_feeds = kv.get_index("csi.max_feeds", c.csi_max_feeds);

  c.power_dbw = kv.get_double("run.power_dbw", c.power_dbw);
  c.drops = kv.get_index("run.drops", c.drops);
  c.seed = static_cast<std::uint64_t>(kv.get_index("run.seed", static_cast<Index>(c.seed)));

  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (num_beams < 1) throw std::invalid_argument("config: beams.count must be >= 1");
  if (cluster_size < 1) throw std::invalid_argument("config: clusters.size must be >= 1");
  if (feeds_per_beam < 1.0) throw std::invalid_argument("config: feeds.per_beam must be >= 1");
  if (drops < 1) throw std::invalid_argument("config: run.drops must be >= 1");
  if (feeder.rho < 0.0 || feeder.rho > 1.0) {
    throw std::invalid_argument("config: feeder.rho must be in [0,1]");
  }
  if (csi_max_feeds < 0) throw std::invalid_argument("config: csi.max_feeds must be >= 0");
}

ExperimentConfig ExperimentConfig::paper_scale() {
  ExperimentConfig c;
  c.num_beams = 100;
  c.cluster_size = 7;  // 14 gateways, two clusters of 8
  c.feeds_per_beam = 2.45;
  c.beam_spacing_deg = 0.65;
  c.drops = 500;
  return c;
}

}  // namespace satprec
