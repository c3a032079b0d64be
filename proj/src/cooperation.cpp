// SPDX-License-Identifier: Apache-2.0
#include "satprec/cooperation.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/SVD>

namespace satprec {

const std::vector<Index>& CooperationScheme::group_of(Index g) const {
  for (const auto& grp : groups) {
    if (std::find(grp.begin(), grp.end(), g) != grp.end()) return grp;
  }
  throw std::invalid_argument("gateway not covered by cooperation groups");
}

CooperationScheme make_scheme(CooperationKind kind, Index num_gateways, Index group_size) {
  CooperationScheme s;
  s.kind = kind;
  switch (kind) {
    case CooperationKind::Icm:
      for (Index g = 0; g < num_gateways; ++g) s.groups.push_back({g});
      s.group_size = 1;
      break;
    case CooperationKind::GroupCollab: {
      if (group_size <= 0) throw std::invalid_argument("group scheme needs a group size");
      s.group_size = group_size;
      for (Index start = 0; start < num_gateways; start += group_size) {
        std::vector<Index> grp;
        for (Index g = start; g < std::min(num_gateways, start + group_size); ++g) grp.push_back(g);
        s.groups.push_back(std::move(grp));
      }
      break;
    }
    case CooperationKind::Gcm:
    case CooperationKind::SingleGatewayRef: {
      std::vector<Index> all(num_gateways);
      for (Index g = 0; g < num_gateways; ++g) all[g] = g;
      s.groups.push_back(std::move(all));
      s.group_size = num_gateways;
      break;
    }
    case CooperationKind::Lmc:
      for (Index g = 0; g < num_gateways; ++g) s.groups.push_back({g});
      s.group_size = 1;
      break;
  }
  return s;
}

CooperationKind parse_cooperation(const std::string& name) {
  if (name == "icm") return CooperationKind::Icm;
  if (name == "4gc" || name == "7gc") return CooperationKind::GroupCollab;
  if (name == "gcm") return CooperationKind::Gcm;
  if (name == "lmc") return CooperationKind::Lmc;
  if (name == "ref") return CooperationKind::SingleGatewayRef;
  throw std::invalid_argument("unknown cooperation scheme: " + name);
}

std::string cooperation_name(const CooperationScheme& scheme) {
  switch (scheme.kind) {
    case CooperationKind::Icm: return "icm";
    case CooperationKind::GroupCollab: return std::to_string(scheme.group_size) + "gc";
    case CooperationKind::Gcm: return "gcm";
    case CooperationKind::Lmc: return "lmc";
    case CooperationKind::SingleGatewayRef: return "ref";
  }
  return "?";
}

RankOneSummary rank_one_compress(const CMatX& block) {
  RankOneSummary out;
  if (block.size() == 0) throw std::invalid_argument("rank_one_compress: empty block");
  if (block.norm() == 0.0) {
    out.sigma = 0.0;
    out.right_vector = CVecX::Zero(block.cols());
    out.right_vector(0) = 1.0;
    out.degenerate = true;
    return out;
  }
  Eigen::JacobiSVD<CMatX> svd(block, Eigen::ComputeThinV);
  out.sigma = svd.singularValues()(0);
  out.right_vector = svd.matrixV().col(0);
  return out;
}

CMatX build_compressed_interference(Index gateway,
                                    const std::vector<std::optional<RankOneSummary>>& per_cluster,
                                    Index num_feeds) {
  Index rows = 0;
  for (Index c = 0; c < static_cast<Index>(per_cluster.size()); ++c) {
    if (c == gateway) continue;
    if (!per_cluster[c].has_value()) {
      throw std::invalid_argument("build_compressed_interference: missing pair for cluster " +
                                  std::to_string(c));
    }
    ++rows;
  }
  CMatX g_mat(rows, num_feeds);
  Index r = 0;
  for (Index c = 0; c < static_cast<Index>(per_cluster.size()); ++c) {
    if (c == gateway) continue;
    const auto& ro = *per_cluster[c];
    g_mat.row(r++) = ro.sigma * ro.right_vector.adjoint();
  }
  return g_mat;
}

CsiView effective_csi(const CooperationScheme& scheme, Index gateway, const ChannelMatrix& csi) {
  const ClusterLayout& layout = csi.layout;
  const Index G = layout.num_gateways;
  CsiView view;
  view.gateway = gateway;
  view.knowledge.assign(G, CsiView::Knowledge::Unknown);
  view.full_block.resize(G);
  view.rank_one.resize(G);

  auto know_full = [&](Index c) {
    view.knowledge[c] = CsiView::Knowledge::Full;
    view.full_block[c] = csi.cluster_block(gateway, c);
  };

  switch (scheme.kind) {
    case CooperationKind::Icm:
      know_full(gateway);
      break;
    case CooperationKind::GroupCollab:
      for (Index c : scheme.group_of(gateway)) know_full(c);
      break;
    case CooperationKind::Gcm:
    case CooperationKind::SingleGatewayRef:
      for (Index c = 0; c < G; ++c) know_full(c);
      break;
    case CooperationKind::Lmc:
      know_full(gateway);
      for (Index c = 0; c < G; ++c) {
        if (c == gateway || !layout.clusters_adjacent(gateway, c)) continue;
        view.knowledge[c] = CsiView::Knowledge::RankOne;
        view.rank_one[c] = rank_one_compress(csi.cluster_block(gateway, c));
      }
      break;
  }
  return view;
}

namespace {

GatewayPrecoderResult finish_inner(const CMatX& h_eq, const CMatX& h_for_assembly,
                                   const CMatX& basis, double total_power, double num_gateways,
                                   PrecoderFlavor flavor, MmseRegMode reg, bool feed_space) {
  GatewayPrecoderResult out;
  out.projector = basis;
  if (flavor == PrecoderFlavor::Mmse) {
    out.alpha = mmse_alpha<double>(h_eq, num_gateways, total_power, reg);
    out.inner = inner_mmse<double>(h_eq, out.alpha);
  } else {
    const auto solve = inner_zf<double>(h_eq);
    out.inner_condition = solve.condition;
    if (!solve.ok) {
      throw std::runtime_error("precoder_for_view: virtual channel numerically singular");
    }
    out.inner = solve.precoder;
  }
  const CMatX shaped = feed_space ? CMatX(basis * out.inner) : CMatX(h_for_assembly.adjoint() * basis * out.inner);
  const auto norm = normalize_gateway_power<double>(shaped, total_power, num_gateways);
  out.block = norm.block;
  out.beta = norm.beta;
  return out;
}

}  // namespace

GatewayPrecoderResult precoder_for_view(const CsiView& view, const ClusterLayout& layout,
                                        double total_power, PrecoderFlavor flavor,
                                        MmseRegMode reg) {
  const Index G = layout.num_gateways;
  const Index g = view.gateway;
  const Index kg = layout.cluster_size(g);
  const Index ng = layout.feed_count(g);
  if (view.knowledge[g] != CsiView::Knowledge::Full) {
    throw std::invalid_argument("precoder_for_view: own cluster block must be Full");
  }
  const CMatX& own = view.full_block[g];
  if (own.rows() != kg || own.cols() != ng) {
    throw std::invalid_argument("precoder_for_view: own block dimension mismatch");
  }

  bool any_rank_one = false;
  bool any_full_foreign = false;
  for (Index c = 0; c < G; ++c) {
    if (c == g) continue;
    any_rank_one |= view.knowledge[c] == CsiView::Knowledge::RankOne;
    any_full_foreign |= view.knowledge[c] == CsiView::Knowledge::Full;
  }

  if (!any_rank_one && !any_full_foreign) {
    GatewayPrecoderResult out;
    const double alpha = flavor == PrecoderFlavor::Mmse
                             ? mmse_alpha<double>(own, static_cast<double>(G), total_power, reg)
                             : 0.0;
    const auto icm = icm_precoder<double>(own, total_power, static_cast<double>(G), alpha);
    out.block = icm.block;
    out.beta = icm.beta;
    out.alpha = alpha;
    return out;
  }

  if (any_rank_one) {
    // Feed-space constraint stack: compressed rows as-is, full foreign blocks
    // contribute their raw rows.
    Index rows = 0;
    for (Index c = 0; c < G; ++c) {
      if (c == g) continue;
      if (view.knowledge[c] == CsiView::Knowledge::RankOne) rows += 1;
      if (view.knowledge[c] == CsiView::Knowledge::Full) rows += view.full_block[c].rows();
    }
    CMatX stack(rows, ng);
    Index r = 0;
    for (Index c = 0; c < G; ++c) {
      if (c == g) continue;
      if (view.knowledge[c] == CsiView::Knowledge::RankOne) {
        const auto& ro = view.rank_one[c];
        stack.row(r++) = ro.sigma * ro.right_vector.adjoint();
      } else if (view.knowledge[c] == CsiView::Knowledge::Full) {
        stack.middleRows(r, view.full_block[c].rows()) = view.full_block[c];
        r += view.full_block[c].rows();
      }
    }
    const auto basis = null_projector<double>(stack, kg);
    const CMatX h_eq = virtual_channel<double>(own, basis.basis);
    return finish_inner(h_eq, own, basis.basis, total_power, static_cast<double>(G), flavor, reg,
                        /*feed_space=*/true);
  }

  // Regularized user-space path over the visible clusters.
  Index vis_rows = 0;
  for (Index c = 0; c < G; ++c) {
    if (view.knowledge[c] == CsiView::Knowledge::Full) vis_rows += view.full_block[c].rows();
  }
  CMatX h_vis(vis_rows, ng);
  std::vector<Index> row_clusters(vis_rows);
  Index r = 0;
  for (Index c = 0; c < G; ++c) {
    if (view.knowledge[c] != CsiView::Knowledge::Full) continue;
    h_vis.middleRows(r, view.full_block[c].rows()) = view.full_block[c];
    for (Index i = 0; i < view.full_block[c].rows(); ++i) row_clusters[r + i] = c;
    r += view.full_block[c].rows();
  }
  const auto reg_block = regularize<double>(h_vis, g, row_clusters, static_cast<double>(G), total_power);
  const auto basis = null_projector<double>(reg_block.out_of_cluster, kg);
  const CMatX h_eq = virtual_channel<double>(reg_block.own_rows, basis.basis);
  return finish_inner(h_eq, h_vis, basis.basis, total_power, static_cast<double>(G), flavor, reg,
                      /*feed_space=*/false);
}

GatewayPrecoderResult single_gateway_precoder(const CMatX& channel, double total_power,
                                              PrecoderFlavor flavor, MmseRegMode reg) {
  GatewayPrecoderResult out;
  const double alpha =
      flavor == PrecoderFlavor::Mmse ? mmse_alpha<double>(channel, 1.0, total_power, reg) : 0.0;
  const auto pre = icm_precoder<double>(channel, total_power, 1.0, alpha);
  out.block = pre.block;
  out.beta = pre.beta;
  out.alpha = alpha;
  return out;
}

long long overhead_per_gateway(CooperationKind kind, Index group_size, Index feeds_per_gateway,
                               Index total_beams, Index beams_per_cluster, Index num_gateways) {
  const long long ng = feeds_per_gateway;
  const long long k = total_beams;
  const long long kg = beams_per_cluster;
  const long long g = num_gateways;
  switch (kind) {
    case CooperationKind::Gcm:
      return ng * (k - kg) * g;
    case CooperationKind::GroupCollab:
      return ng * (k - kg) * std::min<long long>(group_size, g);
    case CooperationKind::Lmc:
      return ng * (g - 1);
    case CooperationKind::Icm:
    case CooperationKind::SingleGatewayRef:
      return 0;
  }
  return 0;
}

OverheadReport overhead_count(const CooperationScheme& scheme, const ClusterLayout& layout) {
  OverheadReport out;
  const Index G = layout.num_gateways;
  out.per_gateway.resize(G, 0);
  for (Index g = 0; g < G; ++g) {
    out.per_gateway[g] = overhead_per_gateway(scheme.kind, scheme.group_size, layout.feed_count(g),
                                              layout.num_beams, layout.cluster_size(g), G);
    out.total += out.per_gateway[g];
  }
  return out;
}

}  // namespace satprec
