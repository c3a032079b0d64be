// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include "satprec/impairments.hpp"
#include "satprec/rng.hpp"

using namespace satprec;

namespace {

CMatX random_complex(Index rows, Index cols, Rng& rng) {
  CMatX m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  }
  return m;
}

}  // namespace

TEST_CASE("feeder_matrix") {
  const auto layout = make_uniform_layout(3, 2, 4);  // N = 12, N_g = 4

  SUBCASE("rho zero collapses to the identity") {
    FeederLinkModel m{0.0, 2};
    CHECK(feeder_matrix<double>(m, layout) == CMatX::Identity(12, 12));
  }

  SUBCASE("zero interferers collapse to the identity") {
    FeederLinkModel m{0.9, 0};
    CHECK(feeder_matrix<double>(m, layout) == CMatX::Identity(12, 12));
  }

  SUBCASE("three gateways at rho one couple with all-ones blocks") {
    FeederLinkModel m{1.0, 2};
    const CMatX h = feeder_matrix<double>(m, layout);
    CHECK((h.block(0, 4, 4, 4) - CMatX::Constant(4, 4, 1.0)).norm() == 0.0);   // |1-2| = 1
    CHECK((h.block(0, 8, 4, 4) - CMatX::Constant(4, 4, 1.0)).norm() == 0.0);   // |1-3| = 2, rho^2 = 1
    CHECK((h.block(4, 0, 4, 4) - CMatX::Constant(4, 4, 1.0)).norm() == 0.0);
    CHECK(h.block(0, 0, 4, 4) == CMatX::Identity(4, 4));
  }

  SUBCASE("distance attenuates as rho^|i-j|") {
    FeederLinkModel m{0.5, 2};
    const CMatX h = feeder_matrix<double>(m, layout);
    CHECK(h(0, 4).real() == doctest::Approx(0.5));
    CHECK(h(0, 8).real() == doctest::Approx(0.25));
  }

  SUBCASE("interferer count gates distant pairs") {
    FeederLinkModel m{0.5, 1};
    const CMatX h = feeder_matrix<double>(m, layout);
    CHECK(h.block(0, 8, 4, 4).norm() == 0.0);  // beyond one hop
    CHECK(h(0, 4).real() == doctest::Approx(0.5));
  }

  SUBCASE("rho outside [0, 1] is rejected") {
    CHECK_THROWS_AS(feeder_matrix<double>(FeederLinkModel{1.2, 1}, layout), std::invalid_argument);
    CHECK_THROWS_AS(feeder_matrix<double>(FeederLinkModel{-0.1, 1}, layout), std::invalid_argument);
  }

  SUBCASE("entrywise monotone in rho") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
      double r1 = rng.uniform(), r2 = rng.uniform();
      if (r1 > r2) std::swap(r1, r2);
      const Index m = static_cast<Index>(rng.next_u64() % 3);
      const CMatX a = feeder_matrix<double>(FeederLinkModel{r1, m}, layout);
      const CMatX b = feeder_matrix<double>(FeederLinkModel{r2, m}, layout);
      CHECK(((b.cwiseAbs() - a.cwiseAbs()).array() >= -1e-15).all());
    }
  }
}

TEST_CASE("apply_feeder") {
  Rng rng(6);
  const auto layout = make_uniform_layout(3, 2, 4);
  const CMatX h_u = random_complex(6, 12, rng);

  SUBCASE("identity feeder is a no-op") {
    CHECK(apply_feeder<double>(h_u, CMatX::Identity(12, 12)) == h_u);
  }

  SUBCASE("composite rank never exceeds the factors") {
    FeederLinkModel m{1.0, 2};
    const CMatX h_f = feeder_matrix<double>(m, layout);
    Eigen::JacobiSVD<CMatX> svd_f(h_f);
    Eigen::JacobiSVD<CMatX> svd_c(apply_feeder<double>(h_u, h_f));
    const double tol = 1e-10 * svd_f.singularValues()(0);
    Index rank_f = 0, rank_c = 0;
    for (Index i = 0; i < svd_f.singularValues().size(); ++i) {
      if (svd_f.singularValues()(i) > tol) ++rank_f;
    }
    for (Index i = 0; i < svd_c.singularValues().size(); ++i) {
      if (svd_c.singularValues()(i) > 1e-10 * svd_c.singularValues()(0)) ++rank_c;
    }
    CHECK(rank_c <= std::min<Index>(6, rank_f));
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(apply_feeder<double>(h_u, CMatX::Identity(5, 5)), std::invalid_argument);
  }
}

TEST_CASE("quantize_csi") {
  SUBCASE("half-away-from-zero magnitude rounding") {
    CMatX h(1, 1);
    h(0, 0) = std::complex<double>(0.12345, 0.0);
    const CMatX q = quantize_csi<double>(h);
    CHECK(q(0, 0).real() == doctest::Approx(0.1235).epsilon(1e-12));
    CHECK(std::abs(q(0, 0).imag()) < 1e-15);
  }

  SUBCASE("magnitude clamps at 999.9999") {
    CMatX h(1, 1);
    h(0, 0) = std::complex<double>(1500.0, 0.0);
    CHECK(std::abs(quantize_csi<double>(h)(0, 0)) == doctest::Approx(999.9999).epsilon(1e-12));
  }

  SUBCASE("phase wraps to [0, 360) and 360 maps to 0") {
    CMatX h(1, 2);
    h(0, 0) = std::polar(1.0, -1e-9);               // just below 0 -> 359.99999.. -> 360 -> 0
    h(0, 1) = std::polar(1.0, -0.5 * M_PI);         // 270 degrees
    const CMatX q = quantize_csi<double>(h);
    CHECK(q(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(q(0, 0).imag()) < 1e-12);
    CHECK(std::arg(q(0, 1)) == doctest::Approx(-0.5 * M_PI).epsilon(1e-9));
  }

  SUBCASE("idempotent on random matrices") {
    Rng rng(7);
    const CMatX h = 3.0 * random_complex(40, 25, rng);
    const CMatX q1 = quantize_csi<double>(h);
    const CMatX q2 = quantize_csi<double>(q1);
    CHECK(q1 == q2);
  }

  SUBCASE("entrywise error bound over 1e5 entries") {
    Rng rng(8);
    const Index rows = 200, cols = 500;
    const CMatX h = 2.5 * random_complex(rows, cols, rng);
    const CMatX q = quantize_csi<double>(h);
    const double mag_step = 5e-5;
    const double phase_step = 5e-5 * M_PI / 180.0;
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) {
        const double bound = mag_step + std::abs(h(i, j)) * phase_step + 1e-12;
        CHECK(std::abs(h(i, j) - q(i, j)) <= bound);
      }
    }
  }

  SUBCASE("zero magnitude quantizes to exact zero") {
    CMatX h(1, 1);
    h(0, 0) = std::complex<double>(2e-5, 0.0);  // rounds to 0.0000
    CHECK(quantize_csi<double>(h)(0, 0) == std::complex<double>(0.0, 0.0));
  }
}

TEST_CASE("feed_subset_limit") {
  Rng rng(9);

  SUBCASE("no-op when the row already fits") {
    const CMatX h = random_complex(4, 31, rng);
    CHECK(feed_subset_limit<double>(h, 31) == h);
    const CMatX h2 = random_complex(4, 12, rng);
    CHECK(feed_subset_limit<double>(h2, 31) == h2);
  }

  SUBCASE("single nonzero entry survives") {
    CMatX h = CMatX::Zero(1, 40);
    h(0, 17) = std::complex<double>(0.3, -0.1);
    const CMatX masked = feed_subset_limit<double>(h, 31);
    CHECK(masked == h);
  }

  SUBCASE("equal magnitudes keep the lowest 31 feed indices") {
    CMatX h = CMatX::Constant(1, 40, std::complex<double>(0.5, 0.0));
    const CMatX masked = feed_subset_limit<double>(h, 31);
    for (Index n = 0; n < 31; ++n) CHECK(masked(0, n) == h(0, n));
    for (Index n = 31; n < 40; ++n) CHECK(masked(0, n) == std::complex<double>(0.0, 0.0));
  }

  SUBCASE("keeps exactly the strongest entries per row") {
    const CMatX h = random_complex(6, 50, rng);
    const CMatX masked = feed_subset_limit<double>(h, 31);
    for (Index k = 0; k < 6; ++k) {
      Index kept = 0;
      double weakest_kept = std::numeric_limits<double>::max();
      double strongest_dropped = 0.0;
      for (Index n = 0; n < 50; ++n) {
        if (masked(k, n) != std::complex<double>(0.0, 0.0)) {
          ++kept;
          weakest_kept = std::min(weakest_kept, std::abs(h(k, n)));
        } else {
          strongest_dropped = std::max(strongest_dropped, std::abs(h(k, n)));
        }
      }
      CHECK(kept == 31);
      CHECK(weakest_kept >= strongest_dropped);
    }
  }

  SUBCASE("max_feeds below one is rejected") {
    CHECK_THROWS_AS(feed_subset_limit<double>(CMatX::Zero(2, 2), 0), std::invalid_argument);
  }
}
