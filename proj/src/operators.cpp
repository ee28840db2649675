#include "ritv/operators.hpp"

#include <cmath>
#include <numbers>

#include "ritv/fft.hpp"

namespace ritv {
namespace {

// Zero-boundary reads of the two channels of a V-space field. v1 is defined for
// rows 1..n-1 and v2 for columns 1..n-1 (1-based).
struct BoundedField {
  const GradientField& v;
  long n;

  double c1(long i, long j) const {
    return (i >= 0 && i < n - 1 && j >= 0 && j < n) ? v.v1()(i, j) : 0.0;
  }
  double c2(long i, long j) const {
    return (i >= 0 && i < n && j >= 0 && j < n - 1) ? v.v2()(i, j) : 0.0;
  }
};

// Reads that only honour the grid extent; used on L_s outputs, whose zeroed
// boundary rows are cleared before the transposed stencil is applied.
struct PlainField {
  const GradientField& v;
  long n;

  double c1(long i, long j) const { return (i >= 0 && i < n && j >= 0 && j < n) ? v.v1()(i, j) : 0.0; }
  double c2(long i, long j) const { return (i >= 0 && i < n && j >= 0 && j < n) ? v.v2()(i, j) : 0.0; }
};

void zero_outside_site(GradientField& f, Site site) {
  const std::size_t n = f.n();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_support(site, n, i, j)) {
        f.v1()(i, j) = 0.0;
        f.v2()(i, j) = 0.0;
      }
    }
  }
}

// Clears v1(n, ·) and v2(·, n), the entries a V-space consumer never reads.
void zero_field_boundary(GradientField& f) {
  const std::size_t n = f.n();
  if (n == 0) return;
  for (std::size_t j = 0; j < n; ++j) f.v1()(n - 1, j) = 0.0;
  for (std::size_t i = 0; i < n; ++i) f.v2()(i, n - 1) = 0.0;
}

}  // namespace

std::string_view stencil_name(Stencil s) {
  switch (s) {
    case Stencil::UpDown: return "updown";
    case Stencil::LeftRight: return "leftright";
    case Stencil::Center: return "center";
    case Stencil::Plus: return "plus";
  }
  return "?";
}

FieldSet zero_field_set(std::size_t n) {
  return {GradientField(n), GradientField(n), GradientField(n), GradientField(n)};
}

GradientField forward_diff(const RealImage& u) {
  const std::size_t n = u.n();
  GradientField out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.v1()(i, j) = i + 1 < n ? u(i + 1, j) - u(i, j) : 0.0;
      out.v2()(i, j) = j + 1 < n ? u(i, j + 1) - u(i, j) : 0.0;
    }
  }
  return out;
}

RealImage forward_diff_adjoint(const GradientField& v) {
  const long n = static_cast<long>(v.n());
  const BoundedField f{v, n};
  RealImage out(v.n());
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      out(i, j) = f.c1(i - 1, j) - f.c1(i, j) + f.c2(i, j - 1) - f.c2(i, j);
    }
  }
  return out;
}

GradientField apply_L(Stencil s, const GradientField& v) {
  const long n = static_cast<long>(v.n());
  const BoundedField f{v, n};
  GradientField out(v.n());
  auto& o1 = out.v1();
  auto& o2 = out.v2();
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      switch (s) {
        case Stencil::UpDown:
          o1(i, j) = f.c1(i, j);
          o2(i, j) = 0.25 * (f.c2(i, j) + f.c2(i, j - 1) + f.c2(i + 1, j) + f.c2(i + 1, j - 1));
          break;
        case Stencil::LeftRight:
          o1(i, j) = 0.25 * (f.c1(i, j) + f.c1(i - 1, j) + f.c1(i, j + 1) + f.c1(i - 1, j + 1));
          o2(i, j) = f.c2(i, j);
          break;
        case Stencil::Center:
          o1(i, j) = 0.5 * (f.c1(i, j) + f.c1(i - 1, j));
          o2(i, j) = 0.5 * (f.c2(i, j) + f.c2(i, j - 1));
          break;
        case Stencil::Plus:
          o1(i, j) = 0.5 * (f.c1(i, j) + f.c1(i, j + 1));
          o2(i, j) = 0.5 * (f.c2(i, j) + f.c2(i + 1, j));
          break;
      }
    }
  }
  zero_outside_site(out, stencil_site(s));
  return out;
}

GradientField apply_L_adjoint(Stencil s, const GradientField& v) {
  const long n = static_cast<long>(v.n());
  GradientField w = v;
  zero_outside_site(w, stencil_site(s));
  const PlainField f{w, n};
  GradientField out(v.n());
  auto& o1 = out.v1();
  auto& o2 = out.v2();
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      switch (s) {
        case Stencil::UpDown:
          o1(i, j) = f.c1(i, j);
          o2(i, j) = 0.25 * (f.c2(i, j) + f.c2(i, j + 1) + f.c2(i - 1, j) + f.c2(i - 1, j + 1));
          break;
        case Stencil::LeftRight:
          o1(i, j) = 0.25 * (f.c1(i, j) + f.c1(i + 1, j) + f.c1(i, j - 1) + f.c1(i + 1, j - 1));
          o2(i, j) = f.c2(i, j);
          break;
        case Stencil::Center:
          o1(i, j) = 0.5 * (f.c1(i, j) + f.c1(i + 1, j));
          o2(i, j) = 0.5 * (f.c2(i, j) + f.c2(i, j + 1));
          break;
        case Stencil::Plus:
          o1(i, j) = 0.5 * (f.c1(i, j) + f.c1(i, j - 1));
          o2(i, j) = 0.5 * (f.c2(i, j) + f.c2(i - 1, j));
          break;
      }
    }
  }
  zero_field_boundary(out);
  return out;
}

GradientField sum_L_adjoint(const FieldSet& v) {
  GradientField acc = apply_L_adjoint(kStencils[0], v[0]);
  for (std::size_t k = 1; k < kStencils.size(); ++k) acc += apply_L_adjoint(kStencils[k], v[k]);
  return acc;
}

ComplexImage fourier_masked(const RealImage& u, const SamplingMask& mask) {
  if (u.n() != mask.n()) throw DimensionError("fourier_masked: image and mask sizes differ");
  ComplexImage k = fft2(to_complex(u));
  for (std::size_t idx = 0; idx < k.size(); ++idx) {
    if (!mask[idx]) k[idx] = 0.0;
  }
  return k;
}

RealImage fourier_masked_adjoint(const ComplexImage& r, const SamplingMask& mask) {
  if (r.n() != mask.n()) throw DimensionError("fourier_masked_adjoint: data and mask sizes differ");
  ComplexImage masked = r;
  for (std::size_t idx = 0; idx < masked.size(); ++idx) {
    if (!mask[idx]) masked[idx] = 0.0;
  }
  return real_part(ifft2(masked));
}

SamplingMask rotate_mask90(const SamplingMask& mask, int quarter_turns) {
  const std::size_t n = mask.n();
  SamplingMask cur = mask;
  const int turns = ((quarter_turns % 4) + 4) % 4;
  for (int t = 0; t < turns; ++t) {
    SamplingMask next(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = 0; l < n; ++l) next.set(k, l, cur(l, (n - k) % n));
    }
    cur = std::move(next);
  }
  return cur;
}

ComplexImage rotate_kspace90(const ComplexImage& c) {
  const std::size_t n = c.n();
  ComplexImage out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const Complex phase(std::cos(angle), std::sin(angle));
    for (std::size_t l = 0; l < n; ++l) out(k, l) = phase * c(l, (n - k) % n);
  }
  return out;
}

Site stencil_site(Stencil s) {
  switch (s) {
    case Stencil::UpDown: return Site::RowEdge;
    case Stencil::LeftRight: return Site::ColEdge;
    case Stencil::Center: return Site::Center;
    case Stencil::Plus: return Site::Corner;
  }
  return Site::Center;
}

Site rotated_site(Site s) {
  switch (s) {
    case Site::RowEdge: return Site::ColEdge;
    case Site::ColEdge: return Site::RowEdge;
    default: return s;
  }
}

Stencil rotated_stencil(Stencil s) {
  switch (s) {
    case Stencil::UpDown: return Stencil::LeftRight;
    case Stencil::LeftRight: return Stencil::UpDown;
    default: return s;
  }
}

bool in_support(Site site, std::size_t n, std::size_t i, std::size_t j) {
  switch (site) {
    case Site::Center: return true;
    case Site::RowEdge: return i + 1 < n;
    case Site::ColEdge: return j + 1 < n;
    case Site::Corner: return i + 1 < n && j + 1 < n;
  }
  return false;
}

RealImage rotate_sited(const RealImage& a, Site from) {
  // Geometrically a quarter turn sends the point (x, y) to (n + 1 - y, x).
  // Targets with a half-integer row coordinate pick up a one-row shift.
  const std::size_t n = a.n();
  const Site to = rotated_site(from);
  const bool shifted = to == Site::RowEdge || to == Site::Corner;
  RealImage out(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (shifted && p + 1 == n) continue;
    const std::size_t col = shifted ? n - 2 - p : n - 1 - p;
    for (std::size_t q = 0; q < n; ++q) out(p, q) = a(q, col);
  }
  return out;
}

GradientField rotate_gradient(const GradientField& w) {
  return GradientField(-rotate_sited(w.v2(), Site::ColEdge), rotate_sited(w.v1(), Site::RowEdge));
}

GradientField rotate_stencil_field(Stencil s, const GradientField& v) {
  const Site site = stencil_site(s);
  return GradientField(-rotate_sited(v.v2(), site), rotate_sited(v.v1(), site));
}

FieldSet rotate_field_set(const FieldSet& v) {
  FieldSet out;
  for (Stencil s : kStencils) out[index_of(rotated_stencil(s))] = rotate_stencil_field(s, v[index_of(s)]);
  return out;
}

DualPoint apply_K(const PrimalPoint& x, const SamplingMask& mask) {
  GradientField h = sum_L_adjoint(x.v);
  h -= forward_diff(x.u);
  return {fourier_masked(x.u, mask), std::move(h)};
}

PrimalPoint apply_K_adjoint(const DualPoint& y, const SamplingMask& mask) {
  RealImage u = fourier_masked_adjoint(y.r, mask);
  u -= forward_diff_adjoint(y.h);
  FieldSet v;
  for (Stencil s : kStencils) v[index_of(s)] = apply_L(s, y.h);
  return {std::move(u), std::move(v)};
}

double inner_product(const PrimalPoint& a, const PrimalPoint& b) {
  double acc = inner_product(a.u, b.u);
  for (std::size_t k = 0; k < a.v.size(); ++k) acc += inner_product(a.v[k], b.v[k]);
  return acc;
}

double inner_product(const DualPoint& a, const DualPoint& b) {
  return real_inner_product(a.r, b.r) + inner_product(a.h, b.h);
}

double norm2(const PrimalPoint& x) { return std::sqrt(inner_product(x, x)); }
double norm2(const DualPoint& y) { return std::sqrt(inner_product(y, y)); }

}  // namespace ritv
