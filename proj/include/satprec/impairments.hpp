// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "satprec/layout.hpp"
#include "satprec/types.hpp"

namespace satprec {

// Feeder-link coupling: identity diagonal blocks, rho^|i-j| all-ones blocks
// for gateway pairs within `num_interferers` of each other.
struct FeederLinkModel {
  double rho = 0.0;
  Index num_interferers = 0;  // 0..G-1
};

template <typename T>
ComplexMatrix<T> feeder_matrix(const FeederLinkModel& model, const ClusterLayout& layout) {
  if (model.rho < 0.0 || model.rho > 1.0) {
    throw std::invalid_argument("feeder_matrix: rho must be in [0, 1]");
  }
  const Index n = layout.num_feeds;
  ComplexMatrix<T> h_f = ComplexMatrix<T>::Identity(n, n);
  for (Index i = 0; i < layout.num_gateways; ++i) {
    for (Index j = 0; j < layout.num_gateways; ++j) {
      if (i == j) continue;
      const Index dist = std::abs(i - j);
      if (dist > model.num_interferers) continue;
      const auto [fi, ci] = layout.feeds_of_gateway[i];
      const auto [fj, cj] = layout.feeds_of_gateway[j];
      h_f.block(fi, fj, ci, cj).setConstant(std::complex<T>(std::pow(model.rho, dist), T(0)));
    }
  }
  return h_f;
}

template <typename T>
ComplexMatrix<T> apply_feeder(const ComplexMatrix<T>& h_user, const ComplexMatrix<T>& h_feeder) {
  if (h_user.cols() != h_feeder.rows()) {
    throw std::invalid_argument("apply_feeder: non-conformable dimensions");
  }
  return h_user * h_feeder;
}

// DVB-S2X feedback digit format: ddd.dddd magnitude, ddd.dddd phase in
// degrees, rounding half away from zero.
struct QuantizerSpec {
  int integer_digits = 3;
  int fraction_digits = 4;
  Index max_feeds = 31;

  double step() const { return std::pow(10.0, -fraction_digits); }
  double max_magnitude() const {
    return std::pow(10.0, integer_digits) - step();  // 999.9999
  }
};

template <typename T>
ComplexMatrix<T> quantize_csi(const ComplexMatrix<T>& h, const QuantizerSpec& spec = {}) {
  const double step = spec.step();
  ComplexMatrix<T> out(h.rows(), h.cols());
  for (Index i = 0; i < h.rows(); ++i) {
    for (Index j = 0; j < h.cols(); ++j) {
      const std::complex<T> v = h(i, j);
      double mag = std::round(std::abs(v) / step) * step;
      mag = std::min(mag, spec.max_magnitude());
      if (mag == 0.0) {
        out(i, j) = std::complex<T>(0, 0);
        continue;
      }
      double deg = std::arg(v) * 180.0 / M_PI;
      deg = std::fmod(deg, 360.0);
      if (deg < 0.0) deg += 360.0;
      deg = std::round(deg / step) * step;
      if (deg >= 360.0) deg = 0.0;
      out(i, j) = std::polar(static_cast<T>(mag), static_cast<T>(deg * M_PI / 180.0));
    }
  }
  return out;
}

// Per row keep the `max_feeds` strongest entries, zero the rest; ties go to
// the lower feed index.
template <typename T>
ComplexMatrix<T> feed_subset_limit(const ComplexMatrix<T>& h, Index max_feeds = 31) {
  if (max_feeds < 1) throw std::invalid_argument("feed_subset_limit: max_feeds must be >= 1");
  if (h.cols() <= max_feeds) return h;
  ComplexMatrix<T> out = ComplexMatrix<T>::Zero(h.rows(), h.cols());
  std::vector<Index> order(h.cols());
  for (Index k = 0; k < h.rows(); ++k) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return std::abs(h(k, a)) > std::abs(h(k, b));
    });
    for (Index i = 0; i < max_feeds; ++i) out(k, order[i]) = h(k, order[i]);
  }
  return out;
}

}  // namespace satprec
