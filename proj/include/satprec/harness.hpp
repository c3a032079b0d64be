// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "satprec/config.hpp"
#include "satprec/cooperation.hpp"
#include "satprec/metrics.hpp"
#include "satprec/modcod.hpp"

namespace satprec {

// Immutable per-experiment state shared by all drops.
struct ExperimentContext {
  ExperimentConfig config;
  HexBeamGrid grid;
  ClusterLayout layout;
  Geometry geometry;
  CooperationScheme scheme;
  ModcodTable modcod;
  CMatX feeder;  // N x N, identity when the impairment is off

  static ExperimentContext build(const ExperimentConfig& config);
};

struct DropResult {
  Index drop_index = 0;
  std::uint64_t seed = 0;
  std::string scenario;
  VecX sinr_db;          // per user
  VecX efficiency_bps;   // per user
  double sum_efficiency = 0.0;
  double smse_no_interference = 0.0;
  double smse_interference = 0.0;
  long long overhead_total = 0;
  VecX leakage_ratio;    // per gateway, empty for the reference scenario
  bool excluded = false;
  std::string exclusion_reason;
};

// Full pipeline for one Monte Carlo realization; deterministic in
// (config.seed, drop_index). Numerical failures mark the drop excluded.
DropResult run_drop(const ExperimentContext& ctx, Index drop_index);

// All drops, optionally on several threads; results are indexed by drop and
// independent of the thread count.
std::vector<DropResult> run_experiment(const ExperimentContext& ctx, int threads = 1);

// Precoders for every gateway under the scheme (block-diagonal total), or the
// pooled single-gateway precoder for the reference scenario.
PrecoderSet build_precoders(const ChannelMatrix& csi, const CooperationScheme& scheme,
                            double total_power, PrecoderFlavor flavor,
                            MmseRegMode reg = MmseRegMode::Scaled);

// Frobenius leakage ratio ||H_g^c T_g|| / ||H_g^g T_g|| per gateway.
VecX gateway_leakage(const ChannelMatrix& channel, const CMatX& total);

struct ExperimentSummary {
  Index drops_requested = 0;
  Index drops_ok = 0;
  Index drops_excluded = 0;
  std::vector<std::string> exclusion_reasons;
  SummaryStats user_efficiency;
  SummaryStats drop_sum_efficiency;
  double mean_sinr_db = 0.0;
  double mean_smse_no_interference = 0.0;
  double mean_smse_interference = 0.0;
  long long overhead_total = 0;
};

ExperimentSummary summarize_drops(const std::vector<DropResult>& drops);

struct SweepPoint {
  std::string sweep;  // "power_dbw" | "interferers"
  double value = 0.0;
  std::string scenario;
  std::string flavor;
  ExperimentSummary summary;
};

std::vector<SweepPoint> sweep_power(const ExperimentConfig& config,
                                    const std::vector<double>& powers_dbw, int threads = 1);
std::vector<SweepPoint> sweep_interferers(const ExperimentConfig& config,
                                          const std::vector<Index>& interferer_counts,
                                          int threads = 1);

// drop,seed,scenario,user,beam,cluster,sinr_db,efficiency_bps
void write_results_csv(const std::string& path, const ExperimentContext& ctx,
                       const std::vector<DropResult>& drops);
void write_summary_json(const std::string& path, const ExperimentContext& ctx,
                        const ExperimentSummary& summary);
void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& points);

}  // namespace satprec
