// SPDX-License-Identifier: Apache-2.0
#include "satprec/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace satprec {

namespace {

double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// Extra feed boresights beyond the one-per-beam set: points between beam
// centers of the cluster, cycling through pairs at fractions 1/2, 1/3, 2/3, ...
std::vector<Eigen::Vector2d> extra_boresights(const std::vector<Eigen::Vector2d>& beams,
                                              Index count, double spacing_deg) {
  std::vector<Eigen::Vector2d> out;
  if (count <= 0) return out;
  if (beams.size() == 1) {
    for (Index e = 0; e < count; ++e) {
      const double ang = 2.0 * M_PI * static_cast<double>(e) / 6.0;
      out.push_back(beams[0] + 0.5 * spacing_deg * Eigen::Vector2d{std::cos(ang), std::sin(ang)});
    }
    return out;
  }
  const double fractions[] = {0.5, 1.0 / 3.0, 2.0 / 3.0, 0.25, 0.75};
  const Index pairs = static_cast<Index>(beams.size()) - 1;
  for (Index e = 0; e < count; ++e) {
    const Eigen::Vector2d& a = beams[0];
    const Eigen::Vector2d& b = beams[1 + (e % pairs)];
    const double t = fractions[(e / pairs) % 5];
    out.push_back(a + t * (b - a));
  }
  return out;
}

}  // namespace

Eigen::Vector3d lla_to_ecef(double lon_deg, double lat_deg, double alt_m) {
  const double lon = lon_deg * M_PI / 180.0;
  const double lat = lat_deg * M_PI / 180.0;
  const double r = kEarthRadiusM + alt_m;
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon),
          r * std::sin(lat)};
}

Geometry build_geometry(const GeometryConfig& cfg, const HexBeamGrid& grid,
                        const ClusterLayout& layout) {
  if (static_cast<Index>(grid.axial.size()) != layout.num_beams) {
    throw std::invalid_argument("grid and layout disagree on beam count");
  }
  Geometry geo;
  const double lon = cfg.satellite_longitude_deg * M_PI / 180.0;
  const double r_geo = kEarthRadiusM + kGeoAltitudeM;
  geo.satellite_ecef = {r_geo * std::cos(lon), r_geo * std::sin(lon), 0.0};
  geo.beam_centers_lonlat = grid.lonlat_deg;
  geo.wavelength_m = kSpeedOfLight / cfg.carrier_hz;
  geo.bandwidth_hz = cfg.bandwidth_hz;
  geo.noise_temp_k = cfg.noise_temp_k;
  geo.user_gain_amplitude = db_to_amplitude(cfg.user_gain_dbi);
  geo.beam_radius_deg = 0.5 * grid.spacing_deg;

  // one boresight per beam, then deterministic in-cluster fill points
  for (Index g = 0; g < layout.num_gateways; ++g) {
    std::vector<Eigen::Vector2d> cluster_beams;
    for (Index b : layout.beams_of_cluster[g]) cluster_beams.push_back(grid.lonlat_deg[b]);
    for (const auto& p : cluster_beams) geo.feed_boresights_lonlat.push_back(p);
    const Index extras = layout.feed_count(g) - layout.cluster_size(g);
    for (const auto& p : extra_boresights(cluster_beams, extras, grid.spacing_deg)) {
      geo.feed_boresights_lonlat.push_back(p);
    }
  }

  for (const auto& ll : geo.feed_boresights_lonlat) {
    geo.feed_boresight_dirs.push_back((lla_to_ecef(ll.x(), ll.y()) - geo.satellite_ecef).normalized());
  }

  // feed array elements on a hex grid in the satellite's local tangent plane
  const Eigen::Vector3d zhat = -geo.satellite_ecef.normalized();
  Eigen::Vector3d xhat = Eigen::Vector3d::UnitZ();
  xhat = (xhat - xhat.dot(zhat) * zhat).normalized();
  const Eigen::Vector3d yhat = zhat.cross(xhat);
  std::vector<std::pair<int, int>> elems{{0, 0}};
  int ring = 1;
  while (static_cast<Index>(elems.size()) < layout.num_feeds) {
    for (int q = -ring; q <= ring; ++q) {
      for (int r = -ring; r <= ring; ++r) {
        if (std::max({std::abs(q), std::abs(r), std::abs(q + r)}) == ring) elems.push_back({q, r});
      }
    }
    ++ring;
  }
  for (Index n = 0; n < layout.num_feeds; ++n) {
    const auto [q, r] = elems[n];
    const double ex = cfg.feed_element_spacing_m * (q + 0.5 * r);
    const double ey = cfg.feed_element_spacing_m * (std::sqrt(3.0) / 2.0 * r);
    geo.feed_elements_ecef.push_back(geo.satellite_ecef + ex * xhat + ey * yhat);
  }

  geo.pattern.peak_gain_dbi = cfg.feed_peak_gain_dbi;
  if (cfg.theta3db_deg > 0.0) {
    geo.pattern.theta_3db_rad = cfg.theta3db_deg * M_PI / 180.0;
  } else {
    // mean nearest-neighbour beam separation as seen from the satellite
    double acc = 0.0;
    for (Index k = 0; k < layout.num_beams; ++k) {
      double best = std::numeric_limits<double>::max();
      const Eigen::Vector3d ak = lla_to_ecef(grid.lonlat_deg[k].x(), grid.lonlat_deg[k].y()) -
                                 geo.satellite_ecef;
      for (Index j = 0; j < layout.num_beams; ++j) {
        if (j == k) continue;
        const Eigen::Vector3d aj = lla_to_ecef(grid.lonlat_deg[j].x(), grid.lonlat_deg[j].y()) -
                                   geo.satellite_ecef;
        best = std::min(best, angle_between(ak, aj));
      }
      if (layout.num_beams > 1) acc += best;
    }
    const double mean_sep = layout.num_beams > 1 ? acc / static_cast<double>(layout.num_beams)
                                                 : 0.01 * M_PI / 180.0;
    geo.pattern.theta_3db_rad = cfg.theta3db_factor * mean_sep;
  }
  return geo;
}

std::complex<double> feed_gain(const Geometry& geo, Index feed, const Eigen::Vector3d& user_ecef) {
  const Eigen::Vector3d to_user = user_ecef - geo.satellite_ecef;
  const double theta = angle_between(to_user, geo.feed_boresight_dirs[feed]);
  const double amp = geo.pattern.gain_amplitude(theta);
  const double path = (user_ecef - geo.feed_elements_ecef[feed]).norm();
  const double phase = -2.0 * M_PI * std::fmod(path / geo.wavelength_m, 1.0);
  return std::polar(amp, phase);
}

std::complex<double> w_entry(std::complex<double> g_kn, double distance_m, double wavelength_m,
                             double noise_temp_k, double bandwidth_hz,
                             double user_gain_amplitude) {
  if (distance_m <= 0.0) throw std::invalid_argument("w_entry: distance must be positive");
  if (noise_temp_k <= 0.0) throw std::invalid_argument("w_entry: noise temperature must be positive");
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("w_entry: bandwidth must be positive");
  const double denom =
      4.0 * M_PI * (distance_m / wavelength_m) * std::sqrt(kBoltzmann * noise_temp_k * bandwidth_hz);
  return user_gain_amplitude * g_kn / denom;
}

VecX sample_rain(const RainFadingModel& model, Index num_beams, Rng& rng) {
  VecX a(num_beams);
  if (model.clear_sky) {
    a.setOnes();
    return a;
  }
  for (Index k = 0; k < num_beams; ++k) {
    const double att_db = std::max(0.0, model.mean_db + model.sigma_db * rng.normal());
    a[k] = db_to_linear(att_db);
  }
  return a;
}

ChannelDrop assemble_channel(const Geometry& geo, const ClusterLayout& layout,
                             const RainFadingModel& rain, Rng& user_rng, Rng& rain_rng) {
  if (geo.num_beams() != layout.num_beams || geo.num_feeds() != layout.num_feeds) {
    throw std::invalid_argument("assemble_channel: geometry/layout dimension mismatch");
  }
  const Index K = layout.num_beams;
  const Index N = layout.num_feeds;

  ChannelDrop drop;
  drop.users_ecef.reserve(K);
  drop.user_distance_m.resize(K);
  for (Index k = 0; k < K; ++k) {
    const double radius = geo.beam_radius_deg * std::sqrt(user_rng.uniform());
    const double angle = 2.0 * M_PI * user_rng.uniform();
    const Eigen::Vector2d ll = geo.beam_centers_lonlat[k] +
                               radius * Eigen::Vector2d{std::cos(angle), std::sin(angle)};
    const Eigen::Vector3d p = lla_to_ecef(ll.x(), ll.y());
    drop.users_ecef.push_back(p);
    drop.user_distance_m[k] = (p - geo.satellite_ecef).norm();
  }

  drop.gain_matrix.resize(K, N);
  for (Index k = 0; k < K; ++k) {
    for (Index n = 0; n < N; ++n) {
      const auto g = feed_gain(geo, n, drop.users_ecef[k]);
      drop.gain_matrix(k, n) = w_entry(g, drop.user_distance_m[k], geo.wavelength_m,
                                       geo.noise_temp_k, geo.bandwidth_hz,
                                       geo.user_gain_amplitude);
    }
  }

  drop.rain_linear = sample_rain(rain, K, rain_rng);
  drop.channel.layout = layout;
  drop.channel.entries = drop.gain_matrix;
  for (Index k = 0; k < K; ++k) {
    drop.channel.entries.row(k) /= std::sqrt(drop.rain_linear[k]);
  }
  return drop;
}

}  // namespace satprec
