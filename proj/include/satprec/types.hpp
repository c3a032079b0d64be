// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace satprec {

using Index = Eigen::Index;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatX = ComplexMatrix<double>;
using CVecX = ComplexVector<double>;
using MatX = RealMatrix<double>;
using VecX = RealVector<double>;

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kEarthRadiusM = 6378.137e3;
inline constexpr double kGeoAltitudeM = 35786.0e3;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace satprec
