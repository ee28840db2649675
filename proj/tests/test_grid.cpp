#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ritv/grid.hpp"
#include "test_support.hpp"

namespace ritv {
namespace {

TEST(NormP2, ZeroImageHasZeroNorm) {
  RealImage z(4);
  EXPECT_EQ(norm_p2(z, PNorm::One), 0.0);
  EXPECT_EQ(norm_p2(z, PNorm::Two), 0.0);
  EXPECT_EQ(norm_p2(z, PNorm::Inf), 0.0);
}

TEST(NormP2, OnesPairL1) {
  GradientField v(RealImage(2, 1.0), RealImage(2, 1.0));
  EXPECT_NEAR(norm_p2(v, PNorm::One), 4.0 * std::sqrt(2.0), 1e-14);
}

TEST(NormP2, InfNormIsLargestMagnitude) {
  GradientField v(2);
  v.v1()(0, 0) = 3.0;
  v.v2()(0, 0) = 4.0;
  EXPECT_DOUBLE_EQ(norm_p2(v, PNorm::Inf), 5.0);
}

TEST(NormP2, MismatchedStackThrows) {
  std::vector<RealImage> z{RealImage(3), RealImage(4)};
  EXPECT_THROW(norm_p2(z, PNorm::One), DimensionError);
}

TEST(InnerProduct, OnesAndOrthogonal) {
  EXPECT_DOUBLE_EQ(inner_product(RealImage(3, 1.0), RealImage(3, 1.0)), 9.0);
  RealImage e1(2), e2(2);
  e1(0, 0) = 1.0;
  e2(1, 1) = 1.0;
  EXPECT_EQ(inner_product(e1, e2), 0.0);
  EXPECT_THROW(inner_product(RealImage(2), RealImage(3)), DimensionError);
}

TEST(InnerProduct, MatchesDoubleLoop) {
  std::mt19937_64 rng(11);
  const auto a = testing::random_image(8, rng);
  const auto b = testing::random_image(8, rng);
  double expected = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) expected += a(i, j) * b(i, j);
  EXPECT_NEAR(inner_product(a, b), expected, 1e-13);

  const auto za = testing::random_complex(8, rng);
  const auto zb = testing::random_complex(8, rng);
  Complex zexp = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) zexp += std::conj(za(i, j)) * zb(i, j);
  EXPECT_NEAR(std::abs(inner_product(za, zb) - zexp), 0.0, 1e-13);
  EXPECT_NEAR(real_inner_product(za, zb), zexp.real(), 1e-13);
}

TEST(NormP2Property, TwoNormSquaredIsSelfInnerProduct) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = testing::random_field(9, rng);
    const double n2 = norm_p2(v, PNorm::Two);
    EXPECT_NEAR(n2 * n2, inner_product(v, v), 1e-12 * inner_product(v, v));
  }
}

TEST(NormP2Property, AbsoluteHomogeneityAndTriangle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> alpha_dist(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testing::random_field(7, rng);
    const auto b = testing::random_field(7, rng);
    const double alpha = alpha_dist(rng);
    for (PNorm p : {PNorm::One, PNorm::Two, PNorm::Inf}) {
      const double na = norm_p2(a, p);
      EXPECT_NEAR(norm_p2(alpha * a, p), std::abs(alpha) * na, 1e-12 * std::abs(alpha) * na);
      EXPECT_LE(norm_p2(a + b, p), na + norm_p2(b, p) + 1e-12);
    }
  }
}

TEST(SamplingMask, RateCountsSamples) {
  SamplingMask m(4);
  m.set(0, 0, true);
  m.set(2, 3, true);
  EXPECT_EQ(m.count(), 2u);
  EXPECT_DOUBLE_EQ(m.rate(), 2.0 / 16.0);
}

}  // namespace
}  // namespace ritv
