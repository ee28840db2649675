#pragma once

// Block-matching 3-D analysis/synthesis frame (Φ, Ψ) with ΨΦ = I.
//
// Φ groups similar patches around reference patches on a strided grid, applies
// an orthonormal 2-D DCT to every patch and an orthonormal Haar transform along
// the group axis. Ψ inverts both transforms and averages the overlapping patch
// estimates with uniform weights. Group sizes are padded to a power of two by
// repeating the last (least similar) member.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ritv/grid.hpp"

namespace ritv {

struct BM3DParams {
  std::size_t patch_size = 8;
  std::size_t step = 3;
  std::size_t search_radius = 19;  // 39×39 window
  std::size_t max_group = 16;
  double match_threshold = 0.25;  // mean squared difference per pixel

  void validate() const;
};

struct PatchPos {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  friend bool operator==(const PatchPos&, const PatchPos&) = default;
};

struct PatchGroup {
  std::vector<PatchPos> members;  // reference first, then by increasing distance
  std::size_t padded_size() const;
  friend bool operator==(const PatchGroup&, const PatchGroup&) = default;
};

struct BM3DCodebook {
  std::size_t n = 0;
  std::size_t patch_size = 0;
  std::vector<PatchGroup> groups;

  friend bool operator==(const BM3DCodebook&, const BM3DCodebook&) = default;
};

struct BM3DCoefficients {
  std::size_t patch_size = 0;
  /// groups[g] holds padded_size × patch_size² values; entry [m * P² + k] is
  /// the m-th Haar coefficient of DCT coefficient k.
  std::vector<std::vector<double>> groups;

  std::size_t count_nonzero() const;
  double energy() const;
};

BM3DCodebook build_codebook(const RealImage& z, const BM3DParams& params);

BM3DCoefficients analysis(const RealImage& z, const BM3DCodebook& codebook);
RealImage synthesis(const BM3DCoefficients& w, const BM3DCodebook& codebook);

struct BM3DProxResult {
  RealImage image;
  std::size_t kept = 0;  // coefficients surviving the threshold
};

/// Ψ H_τ(Φ z). With `frozen == nullptr` the codebook is rebuilt from z.
BM3DProxResult bm3d_prox(const RealImage& z, double tau, const BM3DParams& params,
                         const BM3DCodebook* frozen = nullptr);

/// Debug listing, one line per group: "ref i j : i1 j1, i2 j2, ..." (1-based).
void dump_codebook(std::ostream& out, const BM3DCodebook& codebook);

}  // namespace ritv
