// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

#include "satprec/layout.hpp"
#include "satprec/types.hpp"

namespace satprec {

enum class PrecoderFlavor { Zf, Mmse, Icm };

// Inner-MMSE regularizer convention. Scaled loading tracks the virtual
// channel's energy, so the loading strength is power-relative regardless of
// the projector's scale; GOverP and PaperLiteral are the absolute variants.
enum class MmseRegMode { Scaled, GOverP, PaperLiteral };

template <typename T>
struct RegularizedBlock {
  ComplexMatrix<T> full;            // H_g H_g^H + (G/P) I, over the visible rows
  ComplexMatrix<T> own_rows;        // rows of the gateway's own cluster
  ComplexMatrix<T> out_of_cluster;  // remaining rows, stacked in cluster order
};

template <typename T>
struct NullBasis {
  ComplexMatrix<T> basis;      // orthonormal columns
  Index numeric_null_dim = 0;  // singular values below tolerance (incl. implicit zeros)
  bool degenerate = false;     // null space strictly larger than requested
};

template <typename T>
struct InnerSolve {
  ComplexMatrix<T> precoder;
  T condition = T(0);
  bool ok = true;
};

template <typename T>
struct GatewayPrecoder {
  ComplexMatrix<T> block;  // T_g, N_g x K_g
  T beta = T(0);
};

// H_g H_g^H + (G/P) I with rows split into own-cluster and out-of-cluster
// stacks following `row_clusters` (cluster index of every row of H_g).
template <typename T>
RegularizedBlock<T> regularize(const ComplexMatrix<T>& h_g, Index gateway,
                               const std::vector<Index>& row_clusters, T num_gateways,
                               T total_power) {
  if (total_power <= T(0)) throw std::invalid_argument("regularize: total power must be positive");
  if (static_cast<Index>(row_clusters.size()) != h_g.rows()) {
    throw std::invalid_argument("regularize: row_clusters size mismatch");
  }
  RegularizedBlock<T> out;
  out.full = h_g * h_g.adjoint();
  out.full.diagonal().array() += std::complex<T>(num_gateways / total_power, T(0));

  Index own = 0, other = 0;
  for (Index r : row_clusters) (r == gateway ? own : other)++;
  out.own_rows.resize(own, out.full.cols());
  out.out_of_cluster.resize(other, out.full.cols());
  Index io = 0, ic = 0;
  for (Index r = 0; r < out.full.rows(); ++r) {
    if (row_clusters[r] == gateway) {
      out.own_rows.row(io++) = out.full.row(r);
    } else {
      out.out_of_cluster.row(ic++) = out.full.row(r);
    }
  }
  return out;
}

// Orthonormal basis of the (approximate) right null space of `stacked`,
// truncated/extended to `want_cols` columns: the right singular vectors of
// smallest singular value, ties broken by index. Zero-row input returns the
// first want_cols canonical basis vectors.
template <typename T>
NullBasis<T> null_projector(const ComplexMatrix<T>& stacked, Index want_cols) {
  const Index cols = stacked.cols();
  if (want_cols <= 0 || want_cols > cols) {
    throw std::invalid_argument("null_projector: bad requested dimension");
  }
  NullBasis<T> out;
  if (stacked.rows() == 0) {
    out.basis = ComplexMatrix<T>::Identity(cols, want_cols);
    out.numeric_null_dim = cols;
    out.degenerate = want_cols < cols;
    return out;
  }
  Eigen::JacobiSVD<ComplexMatrix<T>> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const T cutoff = sv.size() > 0 ? sv(0) * T(1e-9) : T(0);
  Index zero = cols - sv.size();  // implicit zeros when rows < cols
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cutoff) ++zero;
  }
  out.numeric_null_dim = zero;
  out.degenerate = zero > want_cols;
  out.basis = svd.matrixV().rightCols(want_cols);
  return out;
}

template <typename T>
ComplexMatrix<T> virtual_channel(const ComplexMatrix<T>& own_rows, const ComplexMatrix<T>& basis) {
  if (own_rows.cols() != basis.rows()) {
    throw std::invalid_argument("virtual_channel: non-conformable dimensions");
  }
  return own_rows * basis;
}

// Solve H W = I via SVD with one Newton refinement pass; flags failure when
// the condition number exceeds `cond_limit`.
template <typename T>
InnerSolve<T> inner_zf(const ComplexMatrix<T>& h_eq, T cond_limit = T(1e12)) {
  if (h_eq.rows() != h_eq.cols()) throw std::invalid_argument("inner_zf: square matrix expected");
  InnerSolve<T> out;
  Eigen::JacobiSVD<ComplexMatrix<T>> svd(h_eq, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const T smin = sv(sv.size() - 1);
  out.condition = smin > T(0) ? sv(0) / smin : std::numeric_limits<T>::infinity();
  if (!(out.condition < cond_limit)) {
    out.ok = false;
    out.precoder = ComplexMatrix<T>::Zero(h_eq.rows(), h_eq.cols());
    return out;
  }
  out.precoder = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  const Index n = h_eq.rows();
  out.precoder = out.precoder * (T(2) * ComplexMatrix<T>::Identity(n, n) - h_eq * out.precoder);
  return out;
}

// W = H^H (H H^H + alpha I)^(-1); positive definite for alpha > 0.
template <typename T>
ComplexMatrix<T> inner_mmse(const ComplexMatrix<T>& h_eq, T alpha) {
  if (alpha < T(0)) throw std::invalid_argument("inner_mmse: alpha must be non-negative");
  ComplexMatrix<T> gram = h_eq * h_eq.adjoint();
  gram.diagonal().array() += std::complex<T>(alpha, T(0));
  return h_eq.adjoint() * gram.llt().solve(ComplexMatrix<T>::Identity(gram.rows(), gram.cols()));
}

// (G/P) * mean eigenvalue of H H^H: loading with the same relative strength
// whatever scale the virtual channel carries.
template <typename T>
T scaled_mmse_alpha(const ComplexMatrix<T>& h_eq, T num_gateways, T total_power) {
  if (h_eq.rows() == 0) return T(0);
  return (num_gateways / total_power) * h_eq.squaredNorm() / static_cast<T>(h_eq.rows());
}

template <typename T>
T mmse_alpha(const ComplexMatrix<T>& h_eq, T num_gateways, T total_power, MmseRegMode mode) {
  switch (mode) {
    case MmseRegMode::Scaled:
      return scaled_mmse_alpha(h_eq, num_gateways, total_power);
    case MmseRegMode::GOverP:
      return num_gateways / total_power;
    case MmseRegMode::PaperLiteral:
      return total_power / num_gateways;
  }
  return T(0);
}

// T_g = beta H_g^H V_g^0 W_g with beta such that Tr(T_g^H T_g) = P/G.
template <typename T>
GatewayPrecoder<T> assemble_gateway_precoder(const ComplexMatrix<T>& h_g,
                                             const ComplexMatrix<T>& basis,
                                             const ComplexMatrix<T>& inner, T total_power,
                                             T num_gateways) {
  GatewayPrecoder<T> out;
  const ComplexMatrix<T> unnormalized = h_g.adjoint() * basis * inner;
  const T energy = unnormalized.squaredNorm();
  if (!(energy > T(0)) || !std::isfinite(energy)) {
    throw std::runtime_error("assemble_gateway_precoder: degenerate zero-norm precoder");
  }
  out.beta = std::sqrt((total_power / num_gateways) / energy);
  out.block = out.beta * unnormalized;
  return out;
}

// Per-gateway power normalization applied to an already-shaped block.
template <typename T>
GatewayPrecoder<T> normalize_gateway_power(const ComplexMatrix<T>& unnormalized, T total_power,
                                           T num_gateways) {
  GatewayPrecoder<T> out;
  const T energy = unnormalized.squaredNorm();
  if (!(energy > T(0)) || !std::isfinite(energy)) {
    throw std::runtime_error("normalize_gateway_power: degenerate zero-norm precoder");
  }
  out.beta = std::sqrt((total_power / num_gateways) / energy);
  out.block = out.beta * unnormalized;
  return out;
}

// Individual cluster processing on the own-cluster block: right inverse for
// ZF (alpha = 0), regularized right inverse otherwise. Power P/G.
template <typename T>
GatewayPrecoder<T> icm_precoder(const ComplexMatrix<T>& h_gg, T total_power, T num_gateways,
                                T alpha = T(0)) {
  ComplexMatrix<T> gram = h_gg * h_gg.adjoint();
  if (alpha > T(0)) {
    gram.diagonal().array() += std::complex<T>(alpha, T(0));
  } else {
    Eigen::JacobiSVD<ComplexMatrix<T>> svd(h_gg);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= sv(0) * T(1e-12)) {
      throw std::runtime_error("icm_precoder: rank-deficient own-cluster block");
    }
  }
  const ComplexMatrix<T> un =
      h_gg.adjoint() * gram.llt().solve(ComplexMatrix<T>::Identity(gram.rows(), gram.cols()));
  return normalize_gateway_power(un, total_power, num_gateways);
}

// Block-diagonal assembly: T(feeds_g, beams_g) = T_g, zero elsewhere.
template <typename T>
ComplexMatrix<T> assemble_total(const std::vector<ComplexMatrix<T>>& blocks,
                                const ClusterLayout& layout) {
  if (static_cast<Index>(blocks.size()) != layout.num_gateways) {
    throw std::invalid_argument("assemble_total: one block per gateway expected");
  }
  ComplexMatrix<T> total = ComplexMatrix<T>::Zero(layout.num_feeds, layout.num_beams);
  for (Index g = 0; g < layout.num_gateways; ++g) {
    const auto [first, count] = layout.feeds_of_gateway[g];
    const auto& beams = layout.beams_of_cluster[g];
    if (blocks[g].rows() != count || blocks[g].cols() != static_cast<Index>(beams.size())) {
      throw std::invalid_argument("assemble_total: block dimension mismatch at gateway " +
                                  std::to_string(g));
    }
    for (Index j = 0; j < static_cast<Index>(beams.size()); ++j) {
      total.block(first, beams[j], count, 1) = blocks[g].col(j);
    }
  }
  return total;
}

struct PrecoderSet {
  std::vector<CMatX> inner;       // W_g
  std::vector<CMatX> projectors;  // V_g^0
  std::vector<CMatX> blocks;      // T_g
  VecX beta;
  CMatX total;  // N x K block diagonal
  PrecoderFlavor flavor = PrecoderFlavor::Zf;
  double alpha = 0.0;  // representative inner regularizer (gateway 0)
};

}  // namespace satprec
