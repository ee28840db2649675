#pragma once

#include <span>
#include <vector>

#include "ritv/grid.hpp"

namespace ritv {

enum class GroupShrinkVariant {
  Moreau,     // v · (1 − α / max(‖v‖, α)), the proximal map of α‖·‖₁,₂
  AsPrinted,  // v − v / max(‖v‖, α), kept for comparison only
};

/// Per-pixel group soft thresholding of the pair (v1(i,j), v2(i,j)).
GradientField prox_l12(const GradientField& v, double alpha,
                       GroupShrinkVariant variant = GroupShrinkVariant::Moreau);

/// prox of α(½‖·‖² + Re⟨·, b⟩): (r − αb) / (1 + α), entrywise.
ComplexImage prox_quadratic_linear(const ComplexImage& r, double alpha, const ComplexImage& b);

/// Zeroes every entry with |w| < √(2τ); τ = 0 keeps everything.
std::vector<double> hard_threshold(std::span<const double> w, double tau);
/// In-place variant; returns the number of entries kept.
std::size_t hard_threshold_inplace(std::span<double> w, double tau);

}  // namespace ritv
