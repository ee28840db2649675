#include "ritv/bm3d.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ritv/prox.hpp"

namespace ritv {
namespace {

// Reference offsets along one axis: multiples of the stride, never leaving a
// gap wider than a patch, always ending at n - P.
std::vector<std::size_t> reference_offsets(std::size_t n, std::size_t patch, std::size_t step) {
  std::vector<std::size_t> out;
  const std::size_t last = n - patch;
  const std::size_t stride = std::min(step, patch);
  for (std::size_t p = 0; p < last; p += stride) out.push_back(p);
  out.push_back(last);
  return out;
}

struct Candidate {
  double dist;
  std::size_t raster;
};

class DctMatrix {
 public:
  explicit DctMatrix(std::size_t p) : p_(p), c_(p * p) {
    const double pi = std::numbers::pi;
    for (std::size_t k = 0; k < p; ++k) {
      const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(p));
      for (std::size_t x = 0; x < p; ++x) {
        c_[k * p + x] = scale * std::cos(pi * (2.0 * static_cast<double>(x) + 1.0) * static_cast<double>(k) /
                                         (2.0 * static_cast<double>(p)));
      }
    }
  }

  // out = C · in · Cᵀ
  void forward(const double* in, double* out, std::vector<double>& tmp) const {
    tmp.assign(p_ * p_, 0.0);
    for (std::size_t k = 0; k < p_; ++k)
      for (std::size_t x = 0; x < p_; ++x) {
        const double c = c_[k * p_ + x];
        for (std::size_t y = 0; y < p_; ++y) tmp[k * p_ + y] += c * in[x * p_ + y];
      }
    for (std::size_t k = 0; k < p_; ++k)
      for (std::size_t l = 0; l < p_; ++l) {
        double acc = 0.0;
        for (std::size_t y = 0; y < p_; ++y) acc += tmp[k * p_ + y] * c_[l * p_ + y];
        out[k * p_ + l] = acc;
      }
  }

  // out = Cᵀ · in · C
  void inverse(const double* in, double* out, std::vector<double>& tmp) const {
    tmp.assign(p_ * p_, 0.0);
    for (std::size_t k = 0; k < p_; ++k)
      for (std::size_t x = 0; x < p_; ++x) {
        const double c = c_[k * p_ + x];
        for (std::size_t l = 0; l < p_; ++l) tmp[x * p_ + l] += c * in[k * p_ + l];
      }
    for (std::size_t x = 0; x < p_; ++x)
      for (std::size_t y = 0; y < p_; ++y) {
        double acc = 0.0;
        for (std::size_t l = 0; l < p_; ++l) acc += tmp[x * p_ + l] * c_[l * p_ + y];
        out[x * p_ + y] = acc;
      }
  }

 private:
  std::size_t p_;
  std::vector<double> c_;
};

// Orthonormal multilevel Haar along the group axis; `stride` separates
// consecutive group members in `data`, `len` is a power of two.
void haar_forward(double* data, std::size_t len, std::size_t stride, std::vector<double>& tmp) {
  tmp.resize(len);
  for (std::size_t m = len; m > 1; m /= 2) {
    const std::size_t half = m / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const double a = data[(2 * i) * stride];
      const double b = data[(2 * i + 1) * stride];
      tmp[i] = (a + b) * std::numbers::sqrt2 / 2.0;
      tmp[half + i] = (a - b) * std::numbers::sqrt2 / 2.0;
    }
    for (std::size_t i = 0; i < m; ++i) data[i * stride] = tmp[i];
  }
}

void haar_inverse(double* data, std::size_t len, std::size_t stride, std::vector<double>& tmp) {
  tmp.resize(len);
  for (std::size_t m = 2; m <= len; m *= 2) {
    const std::size_t half = m / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const double s = data[i * stride];
      const double d = data[(half + i) * stride];
      tmp[2 * i] = (s + d) * std::numbers::sqrt2 / 2.0;
      tmp[2 * i + 1] = (s - d) * std::numbers::sqrt2 / 2.0;
    }
    for (std::size_t i = 0; i < m; ++i) data[i * stride] = tmp[i];
  }
}

const PatchPos& padded_member(const PatchGroup& g, std::size_t m) {
  return m < g.members.size() ? g.members[m] : g.members.back();
}

void check_codebook(const RealImage& z, const BM3DCodebook& cb) {
  if (cb.n != z.n()) {
    throw DimensionError("codebook built for n=" + std::to_string(cb.n) + " applied to n=" + std::to_string(z.n()));
  }
}

}  // namespace

void BM3DParams::validate() const {
  if (patch_size < 2) throw ParameterError("BM3D patch_size must be at least 2");
  if (step < 1) throw ParameterError("BM3D step must be at least 1");
  if (max_group < 1 || !std::has_single_bit(max_group)) {
    throw ParameterError("BM3D max_group must be a power of two, got " + std::to_string(max_group));
  }
  if (!(match_threshold >= 0.0)) throw ParameterError("BM3D match_threshold must be nonnegative");
}

std::size_t PatchGroup::padded_size() const { return std::bit_ceil(members.size()); }

std::size_t BM3DCoefficients::count_nonzero() const {
  std::size_t c = 0;
  for (const auto& g : groups) c += static_cast<std::size_t>(std::count_if(g.begin(), g.end(), [](double x) { return x != 0.0; }));
  return c;
}

double BM3DCoefficients::energy() const {
  double e = 0.0;
  for (const auto& g : groups)
    for (double x : g) e += x * x;
  return e;
}

BM3DCodebook build_codebook(const RealImage& z, const BM3DParams& params) {
  params.validate();
  const std::size_t n = z.n();
  const std::size_t P = params.patch_size;
  if (n < P) {
    throw ParameterError("image side " + std::to_string(n) + " is smaller than the patch size " + std::to_string(P));
  }
  BM3DCodebook cb{n, P, {}};
  const auto offsets = reference_offsets(n, P, params.step);
  const std::size_t last = n - P;
  const std::size_t R = params.search_radius;
  const double limit = params.match_threshold * static_cast<double>(P * P);
  const std::size_t others = params.max_group - 1;

  std::vector<Candidate> best;
  best.reserve(others + 1);
  cb.groups.reserve(offsets.size() * offsets.size());
  for (std::size_t ri : offsets) {
    for (std::size_t rj : offsets) {
      best.clear();
      const std::size_t i0 = ri > R ? ri - R : 0, i1 = std::min(ri + R, last);
      const std::size_t j0 = rj > R ? rj - R : 0, j1 = std::min(rj + R, last);
      for (std::size_t ci = i0; ci <= i1 && others > 0; ++ci) {
        for (std::size_t cj = j0; cj <= j1; ++cj) {
          if (ci == ri && cj == rj) continue;
          const bool full = best.size() == others;
          const double bound = full ? std::min(limit, best.back().dist) : limit;
          double d = 0.0;
          bool rejected = false;
          for (std::size_t a = 0; a < P && !rejected; ++a) {
            const double* pr = &z(ri + a, rj);
            const double* pc = &z(ci + a, cj);
            for (std::size_t b = 0; b < P; ++b) {
              const double diff = pr[b] - pc[b];
              d += diff * diff;
            }
            rejected = d > bound || (full && d >= best.back().dist);
          }
          if (rejected) continue;
          // Candidates arrive in raster order, so ties keep the earlier one.
          const Candidate c{d, ci * n + cj};
          const auto pos = std::upper_bound(best.begin(), best.end(), c,
                                            [](const Candidate& x, const Candidate& y) { return x.dist < y.dist; });
          best.insert(pos, c);
          if (best.size() > others) best.pop_back();
        }
      }
      PatchGroup g;
      g.members.reserve(best.size() + 1);
      g.members.push_back({static_cast<std::uint32_t>(ri), static_cast<std::uint32_t>(rj)});
      for (const auto& c : best) {
        g.members.push_back({static_cast<std::uint32_t>(c.raster / n), static_cast<std::uint32_t>(c.raster % n)});
      }
      cb.groups.push_back(std::move(g));
    }
  }
  return cb;
}

BM3DCoefficients analysis(const RealImage& z, const BM3DCodebook& cb) {
  check_codebook(z, cb);
  const std::size_t P = cb.patch_size;
  const std::size_t P2 = P * P;
  const DctMatrix dct(P);
  BM3DCoefficients w{P, {}};
  w.groups.reserve(cb.groups.size());
  std::vector<double> patch(P2), tmp, htmp;
  for (const auto& g : cb.groups) {
    const std::size_t G = g.padded_size();
    std::vector<double> coef(G * P2);
    for (std::size_t m = 0; m < G; ++m) {
      const PatchPos& pos = padded_member(g, m);
      for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = 0; b < P; ++b) patch[a * P + b] = z(pos.row + a, pos.col + b);
      dct.forward(patch.data(), &coef[m * P2], tmp);
    }
    for (std::size_t k = 0; k < P2; ++k) haar_forward(&coef[k], G, P2, htmp);
    w.groups.push_back(std::move(coef));
  }
  return w;
}

RealImage synthesis(const BM3DCoefficients& w, const BM3DCodebook& cb) {
  if (w.groups.size() != cb.groups.size() || w.patch_size != cb.patch_size) {
    throw DimensionError("BM3D coefficients do not match the codebook");
  }
  const std::size_t n = cb.n;
  const std::size_t P = cb.patch_size;
  const std::size_t P2 = P * P;
  const DctMatrix dct(P);
  RealImage acc(n);
  std::vector<std::uint32_t> count(n * n, 0);
  std::vector<double> coef, patch(P2), tmp, htmp;
  for (std::size_t gi = 0; gi < cb.groups.size(); ++gi) {
    const auto& g = cb.groups[gi];
    const std::size_t G = g.padded_size();
    if (w.groups[gi].size() != G * P2) throw DimensionError("BM3D group coefficient block has the wrong size");
    coef = w.groups[gi];
    for (std::size_t k = 0; k < P2; ++k) haar_inverse(&coef[k], G, P2, htmp);
    for (std::size_t m = 0; m < G; ++m) {
      const PatchPos& pos = padded_member(g, m);
      dct.inverse(&coef[m * P2], patch.data(), tmp);
      for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = 0; b < P; ++b) {
          acc(pos.row + a, pos.col + b) += patch[a * P + b];
          ++count[(pos.row + a) * n + pos.col + b];
        }
    }
  }
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (count[k] == 0) throw std::logic_error("BM3D synthesis: pixel not covered by any patch");
    acc[k] /= static_cast<double>(count[k]);
  }
  return acc;
}

BM3DProxResult bm3d_prox(const RealImage& z, double tau, const BM3DParams& params, const BM3DCodebook* frozen) {
  if (!(tau >= 0.0)) throw ParameterError("bm3d_prox: tau must be nonnegative");
  BM3DCodebook rebuilt;
  if (frozen == nullptr) rebuilt = build_codebook(z, params);
  const BM3DCodebook& cb = frozen ? *frozen : rebuilt;
  BM3DCoefficients w = analysis(z, cb);
  std::size_t kept = 0;
  for (auto& g : w.groups) kept += hard_threshold_inplace(g, tau);
  return {synthesis(w, cb), kept};
}

void dump_codebook(std::ostream& out, const BM3DCodebook& cb) {
  for (const auto& g : cb.groups) {
    out << "ref " << g.members.front().row + 1 << ' ' << g.members.front().col + 1 << " :";
    for (std::size_t m = 0; m < g.members.size(); ++m) {
      out << (m ? ", " : " ") << g.members[m].row + 1 << ' ' << g.members[m].col + 1;
    }
    out << '\n';
  }
}

}  // namespace ritv
