#pragma once

// Synthetic acquisitions: phantom, k-space sampling masks, noisy measurements.

#include <cstdint>
#include <string>
#include <string_view>

#include "ritv/grid.hpp"

namespace ritv {

/// Modified Shepp–Logan head phantom, intensities clipped to [0, 1].
RealImage shepp_logan(std::size_t n);

enum class MaskKind { Cartesian, Radial, Spiral };

std::string_view mask_kind_name(MaskKind kind);
MaskKind parse_mask_kind(std::string_view name);

struct MaskSpec {
  MaskKind kind = MaskKind::Radial;
  double rate = 0.2;          // Cartesian and spiral
  std::size_t spokes = 12;    // radial
  std::uint64_t seed = 0;     // Cartesian row selection
  bool symmetrize90 = false;  // OR with the three quarter turns about DC

  void validate() const;
};

/// Mask in DFT order (zero frequency at (0, 0)); the DC sample is always set.
SamplingMask make_mask(const MaskSpec& spec, std::size_t n);

/// Lines through DC at angles πt/spokes, t = 0..spokes-1, spanning the grid.
SamplingMask radial_mask(std::size_t n, std::size_t spokes);
/// round(rate·n) full rows, DC row first, the rest drawn with density
/// decaying away from DC.
SamplingMask cartesian_mask(std::size_t n, double rate, std::uint64_t seed);
/// Single-arm Archimedean spiral out to radius n/2, its pitch bisected until
/// the rasterized rate meets `rate`.
SamplingMask spiral_mask(std::size_t n, double rate);
/// M ∨ R(M) ∨ R²(M) ∨ R³(M) with R the rotation about DC.
SamplingMask symmetrize90(const SamplingMask& mask);

struct NoiseSpec {
  double sigma = 0.0;  // per real and imaginary part, unitary k-space scale
  std::uint64_t seed = 0;

  void validate() const;
};

/// M ⊙ (F u0 + ε). Noise is drawn for every frequency in raster order, so a
/// given seed produces the same ε regardless of the mask.
ComplexImage simulate_kspace(const RealImage& u0, const SamplingMask& mask, const NoiseSpec& noise);

/// Re F⁻¹(M ⊙ b).
RealImage zero_fill(const ComplexImage& b, const SamplingMask& mask);

}  // namespace ritv
