// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "satprec/layout.hpp"
#include "satprec/pattern.hpp"
#include "satprec/rng.hpp"
#include "satprec/types.hpp"

namespace satprec {

struct GeometryConfig {
  double satellite_longitude_deg = 10.0;
  Eigen::Vector2d coverage_center_lonlat{10.0, 47.0};  // (lon, lat) degrees
  double beam_spacing_deg = 1.2;
  double carrier_hz = 20.0e9;       // Ka band downlink
  double bandwidth_hz = 500.0e6;
  double noise_temp_k = 250.0;
  double user_gain_dbi = 41.7;      // W_R^2 in dBi
  double feed_peak_gain_dbi = 52.0;
  double theta3db_factor = 0.7;     // theta_3dB = factor * mean adjacent-beam separation
  double theta3db_deg = 0.0;        // explicit override when > 0
  double feed_element_spacing_m = 1.0;
};

// Fully-built scene: satellite, beam centers, feed boresights and array
// element positions, pattern, and the RF constants of the w-entry formula.
struct Geometry {
  Eigen::Vector3d satellite_ecef;
  std::vector<Eigen::Vector2d> beam_centers_lonlat;
  std::vector<Eigen::Vector2d> feed_boresights_lonlat;
  std::vector<Eigen::Vector3d> feed_boresight_dirs;  // unit vectors from satellite
  std::vector<Eigen::Vector3d> feed_elements_ecef;
  TaperedAperturePattern pattern;
  double wavelength_m = 0.0;
  double bandwidth_hz = 0.0;
  double noise_temp_k = 0.0;
  double user_gain_amplitude = 0.0;  // W_R
  double beam_radius_deg = 0.0;      // user draw radius

  Index num_beams() const { return static_cast<Index>(beam_centers_lonlat.size()); }
  Index num_feeds() const { return static_cast<Index>(feed_boresights_lonlat.size()); }
};

// dB-domain Gaussian clipped at 0 dB, so linear attenuation is >= 1.
struct RainFadingModel {
  double mean_db = -2.6;
  double sigma_db = 1.63;
  bool clear_sky = false;
};

struct ChannelMatrix {
  CMatX entries;  // K x N
  ClusterLayout layout;

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }

  // H_g: the K x N_g sub-matrix of the feeds assigned to gateway g.
  CMatX gateway_columns(Index g) const {
    const auto [first, count] = layout.feeds_of_gateway[g];
    return entries.middleCols(first, count);
  }

  // H_g^c: rows of cluster c within H_g (K_c x N_g).
  CMatX cluster_block(Index g, Index c) const {
    const auto [first, count] = layout.feeds_of_gateway[g];
    const auto& beams = layout.beams_of_cluster[c];
    CMatX block(static_cast<Index>(beams.size()), count);
    for (Index i = 0; i < static_cast<Index>(beams.size()); ++i) {
      block.row(i) = entries.block(beams[i], first, 1, count);
    }
    return block;
  }
};

struct ChannelDrop {
  ChannelMatrix channel;                     // H = D W
  CMatX gain_matrix;                         // W
  VecX rain_linear;                          // A_k
  std::vector<Eigen::Vector3d> users_ecef;   // one per beam
  VecX user_distance_m;                      // d_k
};

Eigen::Vector3d lla_to_ecef(double lon_deg, double lat_deg, double alt_m = 0.0);

Geometry build_geometry(const GeometryConfig& cfg, const HexBeamGrid& grid,
                        const ClusterLayout& layout);

// Complex feed gain g_kn: tapered-aperture amplitude at the off-axis angle
// between the feed boresight and the user, phase from the feed-element to
// user path length.
std::complex<double> feed_gain(const Geometry& geo, Index feed, const Eigen::Vector3d& user_ecef);

// w_kn = W_R g_kn / (4 pi (d_k/lambda) sqrt(k_B T_R BW)). Throws
// std::invalid_argument for non-positive d_k, T_R or BW.
std::complex<double> w_entry(std::complex<double> g_kn, double distance_m, double wavelength_m,
                             double noise_temp_k, double bandwidth_hz, double user_gain_amplitude);

// Linear attenuation vector, every entry >= 1; clear sky gives all ones.
VecX sample_rain(const RainFadingModel& model, Index num_beams, Rng& rng);

// One TDM slot: a user drawn uniformly in each beam disc, H = D W.
ChannelDrop assemble_channel(const Geometry& geo, const ClusterLayout& layout,
                             const RainFadingModel& rain, Rng& user_rng, Rng& rain_rng);

}  // namespace satprec
