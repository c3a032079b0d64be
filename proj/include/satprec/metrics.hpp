// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "satprec/types.hpp"

namespace satprec {

// SINR_k = |(HT)_kk|^2 / (sum_{j != k} |(HT)_kj|^2 + 1), unit-variance noise.
template <typename T>
RealVector<T> sinr(const ComplexMatrix<T>& h, const ComplexMatrix<T>& t) {
  if (h.cols() != t.rows() || h.rows() != t.cols()) {
    throw std::invalid_argument("sinr: H (KxN) and T (NxK) expected");
  }
  const ComplexMatrix<T> ht = h * t;
  RealVector<T> out(ht.rows());
  for (Index k = 0; k < ht.rows(); ++k) {
    const T signal = std::norm(ht(k, k));
    const T row_power = ht.row(k).squaredNorm();
    out(k) = signal / (row_power - signal + T(1));
  }
  return out;
}

// Standard linear-receiver per-user MSE with unit receive gain; diagnostic
// companion to the trace-form SMSE.
template <typename T>
RealVector<T> per_user_mse(const ComplexMatrix<T>& h, const ComplexMatrix<T>& t) {
  const ComplexMatrix<T> ht = h * t;
  RealVector<T> out(ht.rows());
  for (Index k = 0; k < ht.rows(); ++k) {
    const T row_power = ht.row(k).squaredNorm();
    out(k) = row_power - T(2) * ht(k, k).real() + T(2);  // |1-d|^2 + interference + noise
  }
  return out;
}

template <typename T>
struct SmsePair {
  T no_interference = T(0);
  T interference = T(0);
  RealVector<T> eig_clean;   // eigenvalues of Hu Hu^H
  RealVector<T> eig_feeder;  // eigenvalues of Hu Hf Hf^H Hu^H (conditioned Hf)
};

// Eigenvalue form: sum_i 1/(G/P + lambda_i). The feeder matrix is
// conditioned to unit spectral norm when it exceeds one, keeping the
// coupling passive; a raw all-ones coupling adds energy and flips the
// interference bound on a sizeable fraction of instances.
template <typename T>
SmsePair<T> smse(const ComplexMatrix<T>& h_user, const ComplexMatrix<T>& h_feeder, T num_gateways,
                 T total_power) {
  if (total_power <= T(0)) throw std::invalid_argument("smse: total power must be positive");
  if (h_user.cols() != h_feeder.rows() || h_feeder.rows() != h_feeder.cols()) {
    throw std::invalid_argument("smse: dimension mismatch");
  }
  const T c = num_gateways / total_power;
  SmsePair<T> out;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix<T>> clean(h_user * h_user.adjoint(),
                                                        Eigen::EigenvaluesOnly);
  out.eig_clean = clean.eigenvalues().cwiseMax(T(0));

  Eigen::JacobiSVD<ComplexMatrix<T>> fsvd(h_feeder);
  const T top = fsvd.singularValues().size() > 0 ? fsvd.singularValues()(0) : T(0);
  ComplexMatrix<T> h_f = h_feeder;
  if (top > T(1)) h_f /= top;
  const ComplexMatrix<T> composite = h_user * h_f;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<T>> dirty(composite * composite.adjoint(),
                                                        Eigen::EigenvaluesOnly);
  out.eig_feeder = dirty.eigenvalues().cwiseMax(T(0));

  for (Index i = 0; i < out.eig_clean.size(); ++i) {
    out.no_interference += T(1) / (c + out.eig_clean(i));
    out.interference += T(1) / (c + out.eig_feeder(i));
  }
  return out;
}

template <typename T>
struct TheoremCheck {
  bool holds = false;
  T margin = T(0);  // SMSE_interference - SMSE_no_interference
};

template <typename T>
TheoremCheck<T> verify_theorem1(const ComplexMatrix<T>& h_user, const ComplexMatrix<T>& h_feeder,
                                T num_gateways, T total_power, T tolerance = T(1e-9)) {
  const auto pair = smse<T>(h_user, h_feeder, num_gateways, total_power);
  TheoremCheck<T> out;
  out.margin = pair.interference - pair.no_interference;
  out.holds = out.margin >= -tolerance;
  return out;
}

// Singular-value interlacing of a tall matrix against its first-r-columns
// submatrix: s1(D_{r+1}) >= s1(D_r) >= s2(D_{r+1}) >= ... >= s_{r+1}(D_{r+1}).
template <typename T>
bool check_interlacing(const ComplexMatrix<T>& d, Index r, T rel_tol = T(1e-10)) {
  if (r < 1 || r >= d.cols()) throw std::invalid_argument("check_interlacing: need 1 <= r < cols");
  Eigen::JacobiSVD<ComplexMatrix<T>> small(d.leftCols(r));
  Eigen::JacobiSVD<ComplexMatrix<T>> big(d.leftCols(r + 1));
  const auto& ss = small.singularValues();
  const auto& sb = big.singularValues();
  const T tol = rel_tol * (sb.size() > 0 ? sb(0) : T(0));
  for (Index i = 0; i < r; ++i) {
    if (!(sb(i) >= ss(i) - tol)) return false;
    if (i + 1 < sb.size() && !(ss(i) >= sb(i + 1) - tol)) return false;
  }
  return true;
}

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
  Index count = 0;
};

// Order-independent reduction: values are sorted before any accumulation.
// Percentiles use linear interpolation between closest ranks.
inline SummaryStats summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty input");
  std::sort(values.begin(), values.end());
  SummaryStats s;
  s.count = static_cast<Index>(values.size());
  double acc = 0.0;
  for (double v : values) acc += v;
  s.mean = acc / static_cast<double>(values.size());
  auto pct = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * values[lo] + w * values[hi];
  };
  s.median = pct(0.5);
  s.p5 = pct(0.05);
  s.p95 = pct(0.95);
  return s;
}

}  // namespace satprec
