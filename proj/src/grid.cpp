#include "ritv/grid.hpp"

#include <algorithm>
#include <cmath>

namespace ritv {

SamplingMask::SamplingMask(Grid<std::uint8_t> grid) : grid_(std::move(grid)) {
  for (auto& x : grid_.values()) x = x ? 1 : 0;
}

std::size_t SamplingMask::count() const {
  return static_cast<std::size_t>(std::count(grid_.values().begin(), grid_.values().end(), 1));
}

double SamplingMask::rate() const {
  return grid_.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(grid_.size());
}

double norm_p2(std::span<const RealImage> z, PNorm p) {
  if (z.empty()) return 0.0;
  const std::size_t n = z[0].n();
  for (const auto& img : z) {
    if (img.n() != n) throw DimensionError("norm_p2: images in the stack differ in size");
  }
  const std::size_t count = n * n;
  double acc = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    double sq = 0.0;
    for (const auto& img : z) sq += img[k] * img[k];
    switch (p) {
      case PNorm::One: acc += std::sqrt(sq); break;
      case PNorm::Two: acc += sq; break;
      case PNorm::Inf: acc = std::max(acc, sq); break;
    }
  }
  return p == PNorm::One ? acc : std::sqrt(acc);
}

double norm_p2(const GradientField& v, PNorm p) { return norm_p2(std::span(v.channel), p); }

double norm_p2(const RealImage& u, PNorm p) { return norm_p2(std::span(&u, 1), p); }

double norm2(const ComplexImage& z) {
  double acc = 0.0;
  for (const auto& c : z.values()) acc += std::norm(c);
  return std::sqrt(acc);
}

double inner_product(const RealImage& a, const RealImage& b) {
  a.check_same(b);
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double inner_product(const GradientField& a, const GradientField& b) {
  return inner_product(a.v1(), b.v1()) + inner_product(a.v2(), b.v2());
}

Complex inner_product(const ComplexImage& a, const ComplexImage& b) {
  a.check_same(b);
  Complex acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
  return acc;
}

double real_inner_product(const ComplexImage& a, const ComplexImage& b) {
  a.check_same(b);
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
  return acc;
}

bool all_finite(const RealImage& u) {
  return std::all_of(u.values().begin(), u.values().end(), [](double x) { return std::isfinite(x); });
}

bool all_finite(const ComplexImage& z) {
  return std::all_of(z.values().begin(), z.values().end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

bool all_finite(const GradientField& v) { return all_finite(v.v1()) && all_finite(v.v2()); }

RealImage real_part(const ComplexImage& z) {
  RealImage out(z.n());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = z[k].real();
  return out;
}

ComplexImage to_complex(const RealImage& u) {
  ComplexImage out(u.n());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k];
  return out;
}

}  // namespace ritv
