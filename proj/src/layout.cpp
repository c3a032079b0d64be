// SPDX-License-Identifier: Apache-2.0
#include "satprec/layout.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace satprec {

namespace {

using Hex = std::pair<int, int>;  // axial (q, r)

constexpr Hex kRing[6] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};

int hex_distance(const Hex& a, const Hex& b) {
  const int dq = a.first - b.first;
  const int dr = a.second - b.second;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

Eigen::Vector2d hex_to_plane(const Hex& h) {
  return {h.first + 0.5 * h.second, std::sqrt(3.0) / 2.0 * h.second};
}

// Coarse lattice of 7-hex cluster centers: basis (2,1) and (-1,3) tiles the
// hex plane with flower-of-seven cells.
std::vector<Hex> cluster_centers(Index count) {
  const Hex a1{2, 1}, a2{-1, 3};
  std::vector<Hex> out;
  out.push_back({0, 0});
  int ring = 1;
  while (static_cast<Index>(out.size()) < count) {
    std::vector<std::pair<double, Hex>> shell;
    for (int m = -ring; m <= ring; ++m) {
      for (int n = -ring; n <= ring; ++n) {
        if (std::max({std::abs(m), std::abs(n), std::abs(m + n)}) != ring) continue;
        const Hex c{m * a1.first + n * a2.first, m * a1.second + n * a2.second};
        shell.emplace_back(std::atan2(hex_to_plane(c).y(), hex_to_plane(c).x()), c);
      }
    }
    std::sort(shell.begin(), shell.end());
    for (const auto& [ang, c] : shell) out.push_back(c);
    ++ring;
  }
  out.resize(count);
  return out;
}

}  // namespace

Index ClusterLayout::cluster_of_beam(Index beam) const {
  for (Index g = 0; g < num_gateways; ++g) {
    for (Index b : beams_of_cluster[g]) {
      if (b == beam) return g;
    }
  }
  throw std::invalid_argument("beam index outside layout: " + std::to_string(beam));
}

bool ClusterLayout::clusters_adjacent(Index a, Index b) const {
  if (a == b) return false;
  if (adjacent_clusters.empty()) return true;
  const auto& adj = adjacent_clusters[a];
  return std::find(adj.begin(), adj.end(), b) != adj.end();
}

void ClusterLayout::validate() const {
  if (num_beams <= 0 || num_feeds <= 0 || num_gateways <= 0) {
    throw std::invalid_argument("layout sizes must be positive");
  }
  if (static_cast<Index>(beams_of_cluster.size()) != num_gateways ||
      static_cast<Index>(feeds_of_gateway.size()) != num_gateways) {
    throw std::invalid_argument("layout has wrong number of clusters");
  }
  Index beam_sum = 0;
  std::set<Index> seen_beams;
  for (Index g = 0; g < num_gateways; ++g) {
    const Index kg = cluster_size(g);
    const Index ng = feed_count(g);
    beam_sum += kg;
    if (kg <= 0) throw std::invalid_argument("empty cluster " + std::to_string(g));
    if (kg > ng) {
      throw std::invalid_argument("cluster " + std::to_string(g) + " has K_g > N_g");
    }
    for (Index b : beams_of_cluster[g]) {
      if (b < 0 || b >= num_beams || !seen_beams.insert(b).second) {
        throw std::invalid_argument("beam sets must be disjoint and within range");
      }
    }
  }
  if (beam_sum != num_beams || static_cast<Index>(seen_beams.size()) != num_beams) {
    throw std::invalid_argument("beam sets must cover 1..K exactly");
  }
  Index next = 0;
  for (Index g = 0; g < num_gateways; ++g) {
    const auto [first, count] = feeds_of_gateway[g];
    if (first != next || count <= 0) {
      throw std::invalid_argument("feed ranges must be contiguous and disjoint");
    }
    next = first + count;
  }
  if (next != num_feeds) throw std::invalid_argument("feed ranges must cover 1..N exactly");
}

HexBeamGrid make_hex_grid(Index num_beams, Index cluster_size, double spacing_deg,
                          const Eigen::Vector2d& center_lonlat_deg) {
  if (num_beams <= 0) throw std::invalid_argument("num_beams must be positive");
  if (cluster_size <= 0 || cluster_size > 10) {
    throw std::invalid_argument("cluster_size must be in 1..10");
  }
  if (spacing_deg <= 0.0) throw std::invalid_argument("spacing_deg must be positive");

  const Index num_clusters = std::max<Index>(1, num_beams / cluster_size);
  const Index base = num_beams / num_clusters;
  const Index rem = num_beams % num_clusters;

  const auto centers = cluster_centers(num_clusters);
  std::set<Hex> reserved;  // hexes of all selected cluster templates
  for (const Hex& c : centers) {
    reserved.insert(c);
    for (const Hex& d : kRing) reserved.insert({c.first + d.first, c.second + d.second});
  }

  HexBeamGrid grid;
  grid.spacing_deg = spacing_deg;
  std::set<Hex> used;
  std::vector<std::vector<Hex>> cluster_hexes(num_clusters);
  for (Index g = 0; g < num_clusters; ++g) {
    const Index kg = base + (g < rem ? 1 : 0);
    const Hex c = centers[g];
    std::vector<Hex> hexes{c};
    for (const Hex& d : kRing) {
      if (static_cast<Index>(hexes.size()) >= std::min<Index>(kg, 7)) break;
      hexes.push_back({c.first + d.first, c.second + d.second});
    }
    // annex nearest free hexes when the cluster exceeds the 7-hex template
    if (kg > 7) {
      std::vector<std::pair<std::pair<int, Hex>, Hex>> cand;
      for (int dq = -4; dq <= 4; ++dq) {
        for (int dr = -4; dr <= 4; ++dr) {
          const Hex h{c.first + dq, c.second + dr};
          if (reserved.count(h) || used.count(h)) continue;
          cand.push_back({{hex_distance(h, c), h}, h});
        }
      }
      std::sort(cand.begin(), cand.end());
      for (const auto& item : cand) {
        if (static_cast<Index>(hexes.size()) >= kg) break;
        hexes.push_back(item.second);
      }
    }
    for (const Hex& h : hexes) used.insert(h);
    cluster_hexes[g] = std::move(hexes);
  }

  Index beam = 0;
  grid.beams_of_cluster.resize(num_clusters);
  for (Index g = 0; g < num_clusters; ++g) {
    for (const Hex& h : cluster_hexes[g]) {
      grid.axial.push_back(h);
      const Eigen::Vector2d p = hex_to_plane(h) * spacing_deg;
      grid.lonlat_deg.push_back(center_lonlat_deg + p);
      grid.beams_of_cluster[g].push_back(beam++);
    }
  }

  grid.adjacent_clusters.resize(num_clusters);
  for (Index a = 0; a < num_clusters; ++a) {
    for (Index b = 0; b < num_clusters; ++b) {
      if (a == b) continue;
      bool touch = false;
      for (const Hex& ha : cluster_hexes[a]) {
        for (const Hex& hb : cluster_hexes[b]) {
          if (hex_distance(ha, hb) == 1) {
            touch = true;
            break;
          }
        }
        if (touch) break;
      }
      if (touch) grid.adjacent_clusters[a].push_back(b);
    }
  }
  return grid;
}

std::vector<Index> feed_counts(const std::vector<std::vector<Index>>& beams_of_cluster,
                               double feeds_per_beam) {
  std::vector<Index> out;
  out.reserve(beams_of_cluster.size());
  for (const auto& beams : beams_of_cluster) {
    const auto kg = static_cast<double>(beams.size());
    const Index ng = static_cast<Index>(std::llround(kg * feeds_per_beam));
    out.push_back(std::max<Index>(static_cast<Index>(beams.size()), ng));
  }
  return out;
}

ClusterLayout layout_from_grid(const HexBeamGrid& grid, double feeds_per_beam) {
  ClusterLayout layout;
  layout.num_gateways = static_cast<Index>(grid.beams_of_cluster.size());
  layout.beams_of_cluster = grid.beams_of_cluster;
  layout.adjacent_clusters = grid.adjacent_clusters;
  layout.num_beams = static_cast<Index>(grid.axial.size());
  const auto counts = feed_counts(grid.beams_of_cluster, feeds_per_beam);
  Index first = 0;
  for (Index ng : counts) {
    layout.feeds_of_gateway.push_back({first, ng});
    first += ng;
  }
  layout.num_feeds = first;
  layout.validate();
  return layout;
}

ClusterLayout make_layout(Index num_beams, Index cluster_size, double feeds_per_beam) {
  const auto grid = make_hex_grid(num_beams, cluster_size, 1.0, {0.0, 0.0});
  return layout_from_grid(grid, feeds_per_beam);
}

ClusterLayout make_uniform_layout(Index num_gateways, Index beams_per_cluster,
                                  Index feeds_per_gateway) {
  ClusterLayout layout;
  layout.num_gateways = num_gateways;
  layout.num_beams = num_gateways * beams_per_cluster;
  layout.num_feeds = num_gateways * feeds_per_gateway;
  Index beam = 0, feed = 0;
  for (Index g = 0; g < num_gateways; ++g) {
    std::vector<Index> beams;
    for (Index i = 0; i < beams_per_cluster; ++i) beams.push_back(beam++);
    layout.beams_of_cluster.push_back(std::move(beams));
    layout.feeds_of_gateway.push_back({feed, feeds_per_gateway});
    feed += feeds_per_gateway;
  }
  layout.validate();
  return layout;
}

}  // namespace satprec
