#pragma once

// Independent references: brute-force minimizers for the closed-form proximal
// maps (coarse-to-fine grid search over a box; the last level has a spacing
// well below 1e-3) and dense matrices of the finite-difference stencils.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "ritv/operators.hpp"

namespace ritv::testing {

inline std::array<double, 2> grid_search_2d(const std::function<double(double, double)>& f,
                                            std::array<double, 2> center, double half_width) {
  double step = half_width / 50.0;
  double bx = center[0], by = center[1];
  double best = f(bx, by);
  double cx = center[0], cy = center[1];
  int radius = 50;
  while (step > 2e-5) {
    for (int a = -radius; a <= radius; ++a) {
      for (int b = -radius; b <= radius; ++b) {
        const double x = cx + a * step, y = cy + b * step;
        const double val = f(x, y);
        if (val < best) {
          best = val;
          bx = x;
          by = y;
        }
      }
    }
    cx = bx;
    cy = by;
    step /= 10.0;
    radius = 20;
  }
  return {bx, by};
}

/// argmin_x ½‖x − v‖² + α‖x‖₂ over 2-vectors.
inline std::array<double, 2> group_shrink_oracle(double v1, double v2, double alpha) {
  const double box = std::hypot(v1, v2) + 1.0;
  return grid_search_2d(
      [&](double x, double y) { return 0.5 * ((x - v1) * (x - v1) + (y - v2) * (y - v2)) + alpha * std::hypot(x, y); },
      {0.0, 0.0}, box);
}

/// argmin_x ½|x − r|² + α(½|x|² + Re(conj(x) b)) over complex scalars.
inline std::array<double, 2> quadratic_linear_oracle(double rr, double ri, double alpha, double br, double bi) {
  const double box = std::hypot(rr, ri) + alpha * std::hypot(br, bi) + 1.0;
  return grid_search_2d(
      [&](double x, double y) {
        return 0.5 * ((x - rr) * (x - rr) + (y - ri) * (y - ri)) + alpha * (0.5 * (x * x + y * y) + x * br + y * bi);
      },
      {0.0, 0.0}, box);
}

// Independent dense construction of D and the L stencils, written directly from
// the 1-based pixel formulas and boundary rules.

using Dense = std::vector<std::vector<double>>;

inline std::size_t fidx(std::size_t n, int c, long i, long j) {  // 1-based (i, j)
  return static_cast<std::size_t>(c) * n * n + static_cast<std::size_t>((i - 1) * static_cast<long>(n) + (j - 1));
}

inline Dense dense_D(std::size_t n) {
  Dense m(2 * n * n, std::vector<double>(n * n, 0.0));
  const long N = static_cast<long>(n);
  for (long i = 1; i <= N; ++i) {
    for (long j = 1; j <= N; ++j) {
      const std::size_t pix = static_cast<std::size_t>((i - 1) * N + (j - 1));
      if (i < N) {
        m[fidx(n, 0, i, j)][pix] -= 1.0;
        m[fidx(n, 0, i, j)][pix + n] += 1.0;
      }
      if (j < N) {
        m[fidx(n, 1, i, j)][pix] -= 1.0;
        m[fidx(n, 1, i, j)][pix + 1] += 1.0;
      }
    }
  }
  return m;
}

struct Term {
  int di, dj;
  double w;
};

inline Dense dense_L(Stencil s, std::size_t n) {
  std::vector<Term> t1, t2;
  switch (s) {
    case Stencil::UpDown:
      t1 = {{0, 0, 1.0}};
      t2 = {{0, 0, 0.25}, {0, -1, 0.25}, {1, 0, 0.25}, {1, -1, 0.25}};
      break;
    case Stencil::LeftRight:
      t1 = {{0, 0, 0.25}, {-1, 0, 0.25}, {0, 1, 0.25}, {-1, 1, 0.25}};
      t2 = {{0, 0, 1.0}};
      break;
    case Stencil::Center:
      t1 = {{0, 0, 0.5}, {-1, 0, 0.5}};
      t2 = {{0, 0, 0.5}, {0, -1, 0.5}};
      break;
    case Stencil::Plus:
      t1 = {{0, 0, 0.5}, {0, 1, 0.5}};
      t2 = {{0, 0, 0.5}, {1, 0, 0.5}};
      break;
  }
  const long N = static_cast<long>(n);
  auto zeroed_output = [&](long i, long j) {
    switch (s) {
      case Stencil::UpDown: return i == N;
      case Stencil::LeftRight: return j == N;
      case Stencil::Plus: return i == N || j == N;
      case Stencil::Center: return false;
    }
    return false;
  };
  // v1(a, b) exists for 1 <= a <= n-1; v2(a, b) for 1 <= b <= n-1.
  auto valid = [&](int c, long a, long b) {
    if (a < 1 || b < 1 || a > N || b > N) return false;
    return c == 0 ? a < N : b < N;
  };
  Dense m(2 * n * n, std::vector<double>(2 * n * n, 0.0));
  for (long i = 1; i <= N; ++i) {
    for (long j = 1; j <= N; ++j) {
      if (zeroed_output(i, j)) continue;
      for (int c = 0; c < 2; ++c) {
        for (const Term& t : (c == 0 ? t1 : t2)) {
          const long a = i + t.di, b = j + t.dj;
          if (valid(c, a, b)) m[fidx(n, c, i, j)][fidx(n, c, a, b)] += t.w;
        }
      }
    }
  }
  return m;
}

inline std::vector<double> flatten(const GradientField& v) {
  std::vector<double> out(v.v1().values().begin(), v.v1().values().end());
  out.insert(out.end(), v.v2().values().begin(), v.v2().values().end());
  return out;
}

inline GradientField basis_field(std::size_t n, std::size_t k) {
  GradientField v(n);
  if (k < n * n) v.v1()[k] = 1.0; else v.v2()[k - n * n] = 1.0;
  return v;
}

}  // namespace ritv::testing
