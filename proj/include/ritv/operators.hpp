#pragma once

// Linear maps of the reconstruction model: the forward difference D, the four
// half-pixel interpolators L_s of the rotation-invariant TV, the masked Fourier
// operator F_M, the stacked saddle-point operator K, and 90° rotations.
//
// Conventions (1-based indices, n×n grids):
//   * D uses Neumann boundaries: (Du)_1(n, j) = (Du)_2(i, n) = 0.
//   * Fields fed to L_s read v1(0, ·), v1(n, ·), v2(·, 0), v2(·, n) as zero.
//   * L_s outputs that fall outside its sampling site are written as zero:
//     L↕ row n, L↔ column n, L+ row n and column n.
// Every adjoint is exact with respect to the plain Euclidean inner product on
// the full n×n storage.

#include <array>
#include <string_view>

#include "ritv/grid.hpp"

namespace ritv {

/// Index set S = {↕, ↔, •, +}.
enum class Stencil { UpDown, LeftRight, Center, Plus };

inline constexpr std::array<Stencil, 4> kStencils = {Stencil::UpDown, Stencil::LeftRight,
                                                     Stencil::Center, Stencil::Plus};

std::string_view stencil_name(Stencil s);
inline std::size_t index_of(Stencil s) { return static_cast<std::size_t>(s); }

/// One GradientField per stencil, indexed by index_of(s).
using FieldSet = std::array<GradientField, 4>;

FieldSet zero_field_set(std::size_t n);

GradientField forward_diff(const RealImage& u);
RealImage forward_diff_adjoint(const GradientField& v);

GradientField apply_L(Stencil s, const GradientField& v);
GradientField apply_L_adjoint(Stencil s, const GradientField& v);

/// Σ_s L*_s v_s.
GradientField sum_L_adjoint(const FieldSet& v);

/// M ⊙ F(u) with the unitary DFT.
ComplexImage fourier_masked(const RealImage& u, const SamplingMask& mask);
/// Re F⁻¹(M ⊙ r).
RealImage fourier_masked_adjoint(const ComplexImage& r, const SamplingMask& mask);

/// Counterclockwise quarter turn: (R A)(j, i) = A(i, n - j + 1).
template <typename T>
Grid<T> rotate90(const Grid<T>& a, int quarter_turns = 1) {
  const std::size_t n = a.n();
  Grid<T> cur = a;
  const int turns = ((quarter_turns % 4) + 4) % 4;
  for (int t = 0; t < turns; ++t) {
    Grid<T> next(n);
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) next(p, q) = cur(q, n - 1 - p);
    }
    cur = std::move(next);
  }
  return cur;
}

/// The k-space counterpart of rotate90: rotation of the mask about the zero
/// frequency, M'(k, l) = M(l, -k mod n) in 0-based DFT indices. A mask fixed by
/// this map satisfies ‖M ⊙ F(R w)‖ = ‖M ⊙ F(w)‖ for every w.
SamplingMask rotate_mask90(const SamplingMask& mask, int quarter_turns = 1);

/// The map T with F(R w) = T(F w): (T c)(k, l) = exp(2πik/n) c(l, -k mod n).
ComplexImage rotate_kspace90(const ComplexImage& c);

// Rotation of staggered variables. Each L_s output lives on a sampling site;
// a quarter turn carries sites to sites and may shift indices by one.
enum class Site { Center, RowEdge, ColEdge, Corner };

Site stencil_site(Stencil s);
Site rotated_site(Site s);
Stencil rotated_stencil(Stencil s);
/// True when (i, j) (0-based) is a valid sample position of the site.
bool in_support(Site site, std::size_t n, std::size_t i, std::size_t j);

/// Rotates a scalar array sampled at `from` onto rotated_site(from).
RealImage rotate_sited(const RealImage& a, Site from);
/// Rotation of a D-type field (v1 on row edges, v2 on column edges), so that
/// forward_diff(rotate90(u)) == rotate_gradient(forward_diff(u)).
GradientField rotate_gradient(const GradientField& w);
/// Rotation of the variable of stencil s; the result belongs to rotated_stencil(s).
GradientField rotate_stencil_field(Stencil s, const GradientField& v);
FieldSet rotate_field_set(const FieldSet& v);

// Stacked operator K = (F_M 0 0 0 0; -D L*↕ L*↔ L*• L*+).
struct PrimalPoint {
  RealImage u;
  FieldSet v;
};

struct DualPoint {
  ComplexImage r;
  GradientField h;
};

DualPoint apply_K(const PrimalPoint& x, const SamplingMask& mask);
PrimalPoint apply_K_adjoint(const DualPoint& y, const SamplingMask& mask);

double inner_product(const PrimalPoint& a, const PrimalPoint& b);
double inner_product(const DualPoint& a, const DualPoint& b);
double norm2(const PrimalPoint& x);
double norm2(const DualPoint& y);

}  // namespace ritv
