// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "satprec/channel.hpp"
#include "satprec/cooperation.hpp"
#include "satprec/impairments.hpp"

namespace satprec {

// `key = value` lines, '#' comments, dotted namespaced keys.
class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  Index get_index(const std::string& key, Index fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
  // layout
  Index num_beams = 21;
  Index cluster_size = 7;
  double feeds_per_beam = 1.5;
  double beam_spacing_deg = 1.2;

  GeometryConfig geometry;
  RainFadingModel rain;

  // scheme / precoder
  CooperationKind cooperation = CooperationKind::Gcm;
  Index group_size = 0;  // for 4gc/7gc
  PrecoderFlavor flavor = PrecoderFlavor::Mmse;
  MmseRegMode mmse_reg = MmseRegMode::Scaled;

  // impairments
  FeederLinkModel feeder;
  bool feeder_known_at_gateway = true;
  bool csi_quantized = false;
  Index csi_max_feeds = 0;  // 0 = unlimited

  // run
  double power_dbw = 30.0;
  Index drops = 500;
  std::uint64_t seed = 1;

  double power_watts() const { return db_to_linear(power_dbw); }

  // Throws std::invalid_argument on out-of-range values or unknown keys.
  static ExperimentConfig from_config(const KeyValueConfig& kv);
  void validate() const;

  static ExperimentConfig paper_scale();  // K=100, G=14 preset
};

// scenario ids 1..6 from the evaluation section
CooperationKind scenario_kind(Index scenario, Index& group_size);

}  // namespace satprec
