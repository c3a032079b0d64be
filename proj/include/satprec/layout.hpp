// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "satprec/types.hpp"

namespace satprec {

// Beam/feed partition across gateways. Beam indices are cluster-major and
// feed ranges are contiguous per gateway.
struct ClusterLayout {
  Index num_beams = 0;     // K
  Index num_feeds = 0;     // N
  Index num_gateways = 0;  // G

  std::vector<std::vector<Index>> beams_of_cluster;          // sizes K_g
  std::vector<std::pair<Index, Index>> feeds_of_gateway;     // (first, count), sizes N_g
  std::vector<std::vector<Index>> adjacent_clusters;         // grid adjacency; empty = all adjacent

  Index cluster_size(Index g) const { return static_cast<Index>(beams_of_cluster[g].size()); }
  Index feed_count(Index g) const { return feeds_of_gateway[g].second; }
  Index cluster_of_beam(Index beam) const;
  bool clusters_adjacent(Index a, Index b) const;

  // Throws std::invalid_argument when a partition invariant is broken:
  // sum K_g = K, sum N_g = N, K_g <= N_g, disjoint covering beam sets,
  // contiguous disjoint covering feed ranges.
  void validate() const;
};

// Axial-coordinate hexagonal beam grid partitioned into clusters of
// `cluster_size` (center + ring for size 7; smaller clusters drop ring
// hexes, larger ones annex free neighbouring hexes).
struct HexBeamGrid {
  std::vector<std::pair<int, int>> axial;        // per beam
  std::vector<Eigen::Vector2d> lonlat_deg;       // per beam
  double spacing_deg = 0.0;
  std::vector<std::vector<Index>> beams_of_cluster;
  std::vector<std::vector<Index>> adjacent_clusters;
};

HexBeamGrid make_hex_grid(Index num_beams, Index cluster_size, double spacing_deg,
                          const Eigen::Vector2d& center_lonlat_deg);

// Feed counts per gateway: N_g = max(K_g, round(K_g * feeds_per_beam)),
// rounding half away from zero.
std::vector<Index> feed_counts(const std::vector<std::vector<Index>>& beams_of_cluster,
                               double feeds_per_beam);

// Layout without geometry, for matrix-level tests and the overhead counter.
ClusterLayout make_layout(Index num_beams, Index cluster_size, double feeds_per_beam);

// Layout with explicit uniform sizes (overhead reproduction takes these raw).
ClusterLayout make_uniform_layout(Index num_gateways, Index beams_per_cluster, Index feeds_per_gateway);

ClusterLayout layout_from_grid(const HexBeamGrid& grid, double feeds_per_beam);

}  // namespace satprec
