#include "ritv/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ritv/fft.hpp"
#include "ritv/operators.hpp"
#include "ritv/random.hpp"

namespace ritv {
namespace {

struct Ellipse {
  double intensity, a, b, x0, y0, phi_deg;
};

// Modified Shepp–Logan table (improved contrast variant).
constexpr std::array<Ellipse, 10> kSheppLogan = {{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

// Sets the DFT-order sample at centred frequency (ky, kx). Frequencies whose
// negative is off the grid (the Nyquist row and column for even n) are
// skipped, so trajectories symmetric about DC give Hermitian-symmetric masks.
void set_centered(SamplingMask& m, long ky, long kx) {
  const long n = static_cast<long>(m.n());
  const long hi = (n - 1) / 2, lo = -hi;
  if (ky < lo || ky > hi || kx < lo || kx > hi) return;
  m.set(static_cast<std::size_t>((ky + n) % n), static_cast<std::size_t>((kx + n) % n), true);
}

SamplingMask rasterize_spiral(std::size_t n, double turns) {
  SamplingMask m(n);
  m.set(0, 0, true);
  const double rmax = static_cast<double>(n) / 2.0;
  const double pitch = rmax / (2.0 * std::numbers::pi * turns);  // r = pitch·θ
  for (double theta = 0.0;;) {
    const double r = pitch * theta;
    if (r > rmax) break;
    set_centered(m, std::lround(r * std::sin(theta)), std::lround(r * std::cos(theta)));
    theta += 0.25 / std::hypot(r, pitch);
  }
  return m;
}

}  // namespace

RealImage shepp_logan(std::size_t n) {
  if (n < 16) throw ParameterError("shepp_logan: n must be at least 16, got " + std::to_string(n));
  RealImage u(n);
  const double half = (static_cast<double>(n) - 1.0) / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = (half - static_cast<double>(i)) / half;  // +1 at the top row
    for (std::size_t j = 0; j < n; ++j) {
      const double x = (static_cast<double>(j) - half) / half;
      double value = 0.0;
      for (const auto& e : kSheppLogan) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0, dy = y - e.y0;
        const double xr = dx * std::cos(phi) + dy * std::sin(phi);
        const double yr = dy * std::cos(phi) - dx * std::sin(phi);
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) value += e.intensity;
      }
      u(i, j) = std::clamp(value, 0.0, 1.0);
    }
  }
  return u;
}

std::string_view mask_kind_name(MaskKind kind) {
  switch (kind) {
    case MaskKind::Cartesian: return "cartesian";
    case MaskKind::Radial: return "radial";
    case MaskKind::Spiral: return "spiral";
  }
  return "?";
}

MaskKind parse_mask_kind(std::string_view name) {
  for (MaskKind k : {MaskKind::Cartesian, MaskKind::Radial, MaskKind::Spiral}) {
    if (mask_kind_name(k) == name) return k;
  }
  throw ParameterError("unknown mask kind '" + std::string(name) + "'");
}

void MaskSpec::validate() const {
  if (kind == MaskKind::Radial) {
    if (spokes < 1) throw ParameterError("radial mask needs at least one spoke");
  } else if (!(rate > 0.0 && rate <= 1.0)) {
    throw ParameterError("mask rate must lie in (0, 1], got " + std::to_string(rate));
  }
}

SamplingMask radial_mask(std::size_t n, std::size_t spokes) {
  if (spokes < 1) throw ParameterError("radial mask needs at least one spoke");
  SamplingMask m(n);
  m.set(0, 0, true);
  const long reach = static_cast<long>(2.0 * std::numbers::sqrt2 * static_cast<double>(n)) + 4;  // quarter pixels
  for (std::size_t t = 0; t < spokes; ++t) {
    const double angle = std::numbers::pi * static_cast<double>(t) / static_cast<double>(spokes);
    const double c = std::cos(angle), s = std::sin(angle);
    // std::lround rounds halves away from zero, so each line is symmetric about DC.
    for (long q = -reach; q <= reach; ++q) {
      const double r = 0.25 * static_cast<double>(q);
      set_centered(m, std::lround(-r * s), std::lround(r * c));
    }
  }
  return m;
}

SamplingMask cartesian_mask(std::size_t n, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) throw ParameterError("mask rate must lie in (0, 1]");
  const std::size_t rows = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(rate * static_cast<double>(n))), 1, n);
  std::vector<std::size_t> pool;
  std::vector<double> weight;
  const double half = static_cast<double>(n) / 2.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double k = static_cast<double>(i <= n / 2 ? i : n - i);
    pool.push_back(i);
    weight.push_back(std::pow(1.0 - k / (half + 1.0), 2) + 1e-3);
  }
  std::vector<std::size_t> chosen{0};
  Rng rng(seed);
  while (chosen.size() < rows) {
    double total = 0.0;
    for (double w : weight) total += w;
    double target = uniform01(rng) * total;
    std::size_t pick = 0;
    while (pick + 1 < weight.size() && target >= weight[pick]) target -= weight[pick++];
    chosen.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<long>(pick));
    weight.erase(weight.begin() + static_cast<long>(pick));
  }
  SamplingMask m(n);
  for (std::size_t i : chosen)
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, true);
  return m;
}

SamplingMask spiral_mask(std::size_t n, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) throw ParameterError("mask rate must lie in (0, 1]");
  double hi = static_cast<double>(n);
  SamplingMask best = rasterize_spiral(n, hi);
  if (best.rate() < rate) {
    throw ParameterError("spiral mask cannot reach rate " + std::to_string(rate) + " (maximum " +
                         std::to_string(best.rate()) + ")");
  }
  double lo = 1.0 / 64.0;
  if (rasterize_spiral(n, lo).rate() >= rate) return rasterize_spiral(n, lo);
  for (int it = 0; it < 40 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    SamplingMask m = rasterize_spiral(n, mid);
    if (m.rate() >= rate) {
      hi = mid;
      best = std::move(m);
    } else {
      lo = mid;
    }
  }
  return best;
}

SamplingMask symmetrize90(const SamplingMask& mask) {
  SamplingMask out = mask;
  SamplingMask turned = mask;
  for (int t = 1; t < 4; ++t) {
    turned = rotate_mask90(turned);
    for (std::size_t k = 0; k < out.grid().size(); ++k) {
      if (turned[k]) out.set(k / out.n(), k % out.n(), true);
    }
  }
  return out;
}

SamplingMask make_mask(const MaskSpec& spec, std::size_t n) {
  spec.validate();
  SamplingMask m = [&] {
    switch (spec.kind) {
      case MaskKind::Cartesian: return cartesian_mask(n, spec.rate, spec.seed);
      case MaskKind::Radial: return radial_mask(n, spec.spokes);
      case MaskKind::Spiral: return spiral_mask(n, spec.rate);
    }
    throw ParameterError("unknown mask kind");
  }();
  return spec.symmetrize90 ? symmetrize90(m) : m;
}

void NoiseSpec::validate() const {
  if (!(sigma >= 0.0)) throw ParameterError("noise sigma must be nonnegative");
}

ComplexImage simulate_kspace(const RealImage& u0, const SamplingMask& mask, const NoiseSpec& noise) {
  noise.validate();
  if (u0.n() != mask.n()) throw DimensionError("simulate_kspace: image and mask sizes differ");
  ComplexImage k = fft2(to_complex(u0));
  if (noise.sigma > 0.0) {
    Rng rng(noise.seed);
    for (std::size_t idx = 0; idx < k.size(); ++idx) {
      const auto [re, im] = normal_pair(rng);
      k[idx] += Complex(noise.sigma * re, noise.sigma * im);
    }
  }
  for (std::size_t idx = 0; idx < k.size(); ++idx) {
    if (!mask[idx]) k[idx] = 0.0;
  }
  return k;
}

RealImage zero_fill(const ComplexImage& b, const SamplingMask& mask) { return fourier_masked_adjoint(b, mask); }

}  // namespace ritv
