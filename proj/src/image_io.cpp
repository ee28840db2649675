#include "ritv/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ritv {
namespace {

static_assert(std::endian::native == std::endian::little,
              "grid I/O assumes a little-endian host");

void skip_ws_and_comments(std::istream& in) {
  while (true) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

long read_header_int(std::istream& in, const std::filesystem::path& path) {
  skip_ws_and_comments(in);
  long v = -1;
  in >> v;
  if (!in || v < 0) throw IoError("malformed PGM header in " + path.string());
  return v;
}

std::uint8_t to_byte(double x) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
}

struct Raw {
  std::size_t n = 0;
  long maxval = 255;
  std::vector<long> samples;
};

Raw read_raw_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
    throw IoError(path.string() + " is not a P2/P5 PGM file");
  }
  const long w = read_header_int(in, path);
  const long h = read_header_int(in, path);
  const long maxval = read_header_int(in, path);
  if (w != h) throw DimensionError("PGM image must be square, got " + std::to_string(w) + "x" + std::to_string(h));
  if (maxval <= 0 || maxval > 65535) throw IoError("unsupported PGM maxval in " + path.string());
  Raw raw{static_cast<std::size_t>(w), maxval, std::vector<long>(static_cast<std::size_t>(w * h))};
  if (magic[1] == '2') {
    for (auto& s : raw.samples) {
      in >> s;
      if (!in) throw IoError("truncated P2 data in " + path.string());
    }
  } else {
    in.get();  // single whitespace after maxval
    const bool wide = maxval > 255;
    for (auto& s : raw.samples) {
      unsigned char b[2] = {};
      in.read(reinterpret_cast<char*>(b), wide ? 2 : 1);
      if (!in) throw IoError("truncated P5 data in " + path.string());
      s = wide ? (b[0] << 8 | b[1]) : b[0];
    }
  }
  return raw;
}

void write_bytes(const std::filesystem::path& path, std::size_t n, const std::vector<std::uint8_t>& px,
                 PgmEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  if (encoding == PgmEncoding::Binary) {
    out << "P5\n" << n << ' ' << n << "\n255\n";
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  } else {
    out << "P2\n" << n << ' ' << n << "\n255\n";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out << static_cast<int>(px[i * n + j]) << (j + 1 < n ? ' ' : '\n');
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

RealImage read_pgm(const std::filesystem::path& path) {
  const Raw raw = read_raw_pgm(path);
  RealImage u(raw.n);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = static_cast<double>(raw.samples[k]) / static_cast<double>(raw.maxval);
  return u;
}

void write_pgm(const std::filesystem::path& path, const RealImage& u, PgmEncoding encoding, bool window) {
  double lo = 0.0, hi = 1.0;
  if (window && !u.empty()) {
    const auto [mn, mx] = std::minmax_element(u.values().begin(), u.values().end());
    lo = *mn;
    hi = *mx;
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::vector<std::uint8_t> px(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) px[k] = to_byte((u[k] - lo) / span);
  write_bytes(path, u.n(), px, encoding);
}

void write_mask_pgm(const std::filesystem::path& path, const SamplingMask& mask) {
  std::vector<std::uint8_t> px(mask.n() * mask.n());
  for (std::size_t k = 0; k < px.size(); ++k) px[k] = mask[k] ? 255 : 0;
  write_bytes(path, mask.n(), px, PgmEncoding::Binary);
}

SamplingMask read_mask_pgm(const std::filesystem::path& path) {
  const Raw raw = read_raw_pgm(path);
  Grid<std::uint8_t> g(raw.n);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = raw.samples[k] * 2 > raw.maxval ? 1 : 0;
  return SamplingMask(std::move(g));
}

void write_grid(const std::filesystem::path& path, const RealImage& u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kGridMagic, 8);
  const std::uint64_t n = u.n();
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(u.data()), static_cast<std::streamsize>(u.size() * sizeof(double)));
  if (!out) throw IoError("write failed for " + path.string());
}

RealImage read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8] = {};
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kGridMagic, 8) != 0) throw IoError(path.string() + " is not a grid file");
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || n == 0 || n > (1u << 16)) throw IoError("bad grid size in " + path.string());
  RealImage u(static_cast<std::size_t>(n));
  in.read(reinterpret_cast<char*>(u.data()), static_cast<std::streamsize>(u.size() * sizeof(double)));
  if (!in) throw IoError("truncated grid data in " + path.string());
  return u;
}

}  // namespace ritv
