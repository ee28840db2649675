#pragma once

// Reconstruction quality measures against a reference image u0.

#include <limits>
#include <vector>

#include "ritv/grid.hpp"

namespace ritv {

/// Returned by snr() for an exact reconstruction.
inline constexpr double kInfiniteSnr = std::numeric_limits<double>::infinity();

/// 10·log10(‖u0‖² / ‖u − u0‖²) in dB.
double snr(const RealImage& u, const RealImage& u0);

/// Mean single-scale SSIM over window positions fully inside the image;
/// 11×11 Gaussian window (σ = 1.5), dynamic range 1.
double ssim(const RealImage& u, const RealImage& u0);

/// ‖LoG(u) − LoG(u0)‖ / ‖LoG(u0)‖ with a 15×15, σ = 1.5 LoG kernel and
/// mirror-symmetric boundary extension. Throws if LoG(u0) vanishes.
double hfen(const RealImage& u, const RealImage& u0);

/// Zero-sum 15×15 LoG kernel, row-major.
std::vector<double> log_kernel(std::size_t size = 15, double sigma = 1.5);
/// Correlation with a square odd-sized kernel, symmetric boundary extension.
RealImage filter_symmetric(const RealImage& u, const std::vector<double>& kernel);

struct MetricReport {
  double snr = 0.0;
  double ssim = 0.0;
  double hfen = 0.0;
};

MetricReport evaluate_metrics(const RealImage& u, const RealImage& u0);

}  // namespace ritv
