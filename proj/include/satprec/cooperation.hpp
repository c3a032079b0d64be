// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "satprec/channel.hpp"
#include "satprec/precoder.hpp"

namespace satprec {

enum class CooperationKind { Icm, GroupCollab, Gcm, Lmc, SingleGatewayRef };

struct CooperationScheme {
  CooperationKind kind = CooperationKind::Gcm;
  Index group_size = 0;                    // GroupCollab only
  std::vector<std::vector<Index>> groups;  // partition of 0..G-1

  const std::vector<Index>& group_of(Index g) const;
};

// Groups are contiguous runs of gateway indices; the trailing group takes the
// remainder when group_size does not divide G.
CooperationScheme make_scheme(CooperationKind kind, Index num_gateways, Index group_size = 0);

CooperationKind parse_cooperation(const std::string& name);  // icm|4gc|7gc|gcm|lmc|ref
std::string cooperation_name(const CooperationScheme& scheme);

struct RankOneSummary {
  double sigma = 0.0;
  CVecX right_vector;  // unit norm, length N_g
  bool degenerate = false;
};

// Best Frobenius rank-one row-space summary: largest singular value and its
// right singular vector. Zero input flags degeneracy and returns e_1.
RankOneSummary rank_one_compress(const CMatX& block);

// Rows sigma_i v_i^H stacked in cluster order, own cluster omitted.
// `per_cluster` has one entry per cluster; entry g must be empty.
CMatX build_compressed_interference(Index gateway,
                                    const std::vector<std::optional<RankOneSummary>>& per_cluster,
                                    Index num_feeds);

struct CsiView {
  enum class Knowledge { Unknown, RankOne, Full };
  Index gateway = 0;
  std::vector<Knowledge> knowledge;       // per cluster
  std::vector<CMatX> full_block;          // valid where Full
  std::vector<RankOneSummary> rank_one;   // valid where RankOne
};

// What gateway g knows of its own column slice under the scheme: ICM just the
// own block, group schemes the group's blocks, GCM/Ref everything, LMC the
// own block plus rank-one summaries of grid-adjacent clusters.
CsiView effective_csi(const CooperationScheme& scheme, Index gateway, const ChannelMatrix& csi);

struct GatewayPrecoderResult {
  CMatX block;       // T_g
  CMatX projector;   // V_g^0 (empty for the plain ICM path)
  CMatX inner;       // W_g
  double beta = 0.0;
  double alpha = 0.0;
  double inner_condition = 0.0;
};

// Dispatches the precoding pipeline on whatever the view contains: full
// foreign blocks run the regularized user-space projector, rank-one rows run
// the feed-space null projector, and a view with no foreign knowledge reduces
// to icm_precoder.
GatewayPrecoderResult precoder_for_view(const CsiView& view, const ClusterLayout& layout,
                                        double total_power, PrecoderFlavor flavor,
                                        MmseRegMode reg = MmseRegMode::Scaled);

// Single-gateway reference: precodes the whole K x N channel under the pooled
// constraint Tr(T^H T) = P.
GatewayPrecoderResult single_gateway_precoder(const CMatX& channel, double total_power,
                                              PrecoderFlavor flavor,
                                              MmseRegMode reg = MmseRegMode::Scaled);

struct OverheadReport {
  std::vector<long long> per_gateway;
  long long total = 0;
};

// Complex numbers exchanged between gateways. Full sharing costs
// N_g (K - K_g) G per gateway; group schemes replace G by the nominal group
// size; LMC sends one N_g-vector to each other gateway.
OverheadReport overhead_count(const CooperationScheme& scheme, const ClusterLayout& layout);

// Explicit-parameter form for standalone uniform-layout checks; K is taken
// as given and need not equal G * K_g.
long long overhead_per_gateway(CooperationKind kind, Index group_size, Index feeds_per_gateway,
                               Index total_beams, Index beams_per_cluster, Index num_gateways);

}  // namespace satprec
