#pragma once

#include <filesystem>
#include <stdexcept>

#include "ritv/grid.hpp"

namespace ritv {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PgmEncoding { Ascii /* P2 */, Binary /* P5 */ };

/// Reads a square P2/P5 PGM; intensities are scaled to [0, 1] by maxval.
RealImage read_pgm(const std::filesystem::path& path);

/// Writes an 8-bit view. With window = true the image is min-max stretched to
/// 0..255; otherwise values are clamped from [0, 1].
void write_pgm(const std::filesystem::path& path, const RealImage& u,
               PgmEncoding encoding = PgmEncoding::Binary, bool window = false);

void write_mask_pgm(const std::filesystem::path& path, const SamplingMask& mask);
SamplingMask read_mask_pgm(const std::filesystem::path& path);

// Lossless grid file: 8-byte magic "RITVGRD1", n as little-endian uint64,
// then n² little-endian IEEE-754 doubles in row-major order.
inline constexpr char kGridMagic[9] = "RITVGRD1";

void write_grid(const std::filesystem::path& path, const RealImage& u);
RealImage read_grid(const std::filesystem::path& path);

}  // namespace ritv
