#include <gtest/gtest.h>

#include <cmath>

#include "ritv/metrics.hpp"
#include "ritv/simulation.hpp"
#include "test_support.hpp"

namespace ritv {
namespace {

TEST(Snr, IdenticalImagesAreInfinite) {
  const RealImage u0 = shepp_logan(32);
  EXPECT_EQ(snr(u0, u0), kInfiniteSnr);
}

TEST(Snr, ErrorAsLargeAsSignalIsZeroDb) {
  const RealImage u0 = shepp_logan(32);
  EXPECT_EQ(snr(RealImage(32), u0), 0.0);
}

TEST(Snr, TenPercentScalingIsTwentyDb) {
  const RealImage u0 = shepp_logan(32);
  EXPECT_NEAR(snr(u0 + 0.1 * u0, u0), 20.0, 1e-12);
}

TEST(Snr, DecreasesWithNoiseLevel) {
  const RealImage u0 = shepp_logan(64);
  std::mt19937_64 rng(3);
  const RealImage e = testing::random_image(64, rng);
  double prev = kInfiniteSnr;
  for (double s : {0.01, 0.02, 0.05, 0.1}) {
    const double v = snr(u0 + s * e, u0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Ssim, IdentityIsOne) {
  const RealImage u0 = shepp_logan(64);
  EXPECT_NEAR(ssim(u0, u0), 1.0, 1e-15);
  RealImage c(32);
  c.fill(0.3);
  EXPECT_NEAR(ssim(c, c), 1.0, 1e-15);
}

TEST(Ssim, InversionIsDissimilar) {
  const RealImage u0 = shepp_logan(128);
  RealImage inv(128);
  inv.fill(1.0);
  inv -= u0;
  EXPECT_LT(ssim(inv, u0), 0.5);
}

TEST(Ssim, Symmetric) {
  std::mt19937_64 rng(5);
  const RealImage u0 = shepp_logan(64);
  const RealImage u = u0 + 0.1 * testing::random_image(64, rng);
  EXPECT_NEAR(ssim(u, u0), ssim(u0, u), 1e-14);
  EXPECT_LT(ssim(u, u0), 1.0);
}

TEST(Ssim, RejectsSmallImages) { EXPECT_THROW(ssim(RealImage(8), RealImage(8)), DimensionError); }

// Direct single-window SSIM over an 11x11 image equals the library value.
TEST(Ssim, MatchesSingleWindowFormula) {
  std::mt19937_64 rng(6);
  const RealImage x = testing::random_image(11, rng, 0.0, 1.0);
  const RealImage y = testing::random_image(11, rng, 0.0, 1.0);
  double wsum = 0.0, mx = 0.0, my = 0.0;
  std::vector<double> w(121);
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      w[i * 11 + j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2.0 * 1.5 * 1.5));
      wsum += w[i * 11 + j];
    }
  for (int k = 0; k < 121; ++k) {
    w[k] /= wsum;
    mx += w[k] * x[k];
    my += w[k] * y[k];
  }
  double vx = 0.0, vy = 0.0, cxy = 0.0;
  for (int k = 0; k < 121; ++k) {
    vx += w[k] * (x[k] - mx) * (x[k] - mx);
    vy += w[k] * (y[k] - my) * (y[k] - my);
    cxy += w[k] * (x[k] - mx) * (y[k] - my);
  }
  const double c1 = 1e-4, c2 = 9e-4;
  const double expected = ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  EXPECT_NEAR(ssim(x, y), expected, 1e-12);
}

TEST(Hfen, IdentityIsZero) {
  const RealImage u0 = shepp_logan(64);
  EXPECT_EQ(hfen(u0, u0), 0.0);
}

TEST(Hfen, ConstantShiftIsInvisible) {
  const RealImage u0 = shepp_logan(64);
  RealImage shifted = u0;
  for (double& x : shifted.values()) x += 0.25;
  EXPECT_NEAR(hfen(shifted, u0), 0.0, 1e-12);
}

TEST(Hfen, DoublingGivesOne) {
  const RealImage u0 = shepp_logan(64);
  EXPECT_EQ(hfen(2.0 * u0, u0), 1.0);
}

TEST(Hfen, InvariantToCommonShift) {
  std::mt19937_64 rng(8);
  const RealImage u0 = shepp_logan(64);
  const RealImage u = u0 + 0.05 * testing::random_image(64, rng);
  RealImage a = u, b = u0;
  for (double& x : a.values()) x += 3.0;
  for (double& x : b.values()) x += 3.0;
  EXPECT_NEAR(hfen(a, b), hfen(u, u0), 1e-9);
}

TEST(Hfen, ConstantReferenceIsRejected) {
  RealImage c(32);
  c.fill(0.5);
  EXPECT_THROW(hfen(shepp_logan(32), c), ParameterError);
}

TEST(LogKernel, ZeroSumAndRadialSymmetry) {
  const auto h = log_kernel();
  ASSERT_EQ(h.size(), 225u);
  double total = 0.0;
  for (double x : h) total += x;
  EXPECT_LE(std::abs(total), 1e-10);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) {
      EXPECT_EQ(h[i * 15 + j], h[j * 15 + i]);
      EXPECT_EQ(h[i * 15 + j], h[(14 - i) * 15 + j]);
    }
  EXPECT_LT(h[7 * 15 + 7], 0.0);  // negative centre
}

TEST(LogKernel, SymmetricPaddingMirrorsEdgeSample) {
  RealImage u(4);
  u(0, 0) = 1.0;
  // A 3x3 box sum sees the corner sample four times via reflection.
  const RealImage f = filter_symmetric(u, std::vector<double>(9, 1.0));
  EXPECT_EQ(f(0, 0), 4.0);
  EXPECT_EQ(f(1, 1), 1.0);
  EXPECT_EQ(f(2, 2), 0.0);
}

}  // namespace
}  // namespace ritv
