#pragma once

// Regularizer values and the reconstruction objective.

#include <cstddef>

#include "ritv/bm3d.hpp"
#include "ritv/grid.hpp"
#include "ritv/operators.hpp"

namespace ritv {

/// ‖Du‖₁,₂ with forward differences and Neumann boundary.
double tv_value(const RealImage& u);

struct RITVEvalParams {
  std::size_t max_iters = 500;
  double rel_tol = 1e-10;  // on the change of the value between iterations
  double primal_step = 0.0;  // 0 selects 0.99/‖A‖
  double dual_step = 0.0;

  void validate() const;
};

/// Iterate of the RITV evaluator in the units of u (not rescaled).
struct RITVState {
  FieldSet v;
  GradientField h;  // multiplier of Σ L*_s v_s = Du
};

struct RITVResult {
  double value = 0.0;     // Σ_s ‖v_s‖₁,₂ at termination
  double residual = 0.0;  // ‖Σ L*_s v_s − Du‖₂
  std::size_t iterations = 0;
  bool converged = false;  // residual ≤ 1e-6·‖Du‖₂
  RITVState state;
};

/// min Σ_s ‖v_s‖₁,₂ subject to Σ_s L*_s v_s = Du, by a primal-dual iteration.
/// The problem is solved for Du/‖Du‖∞ and rescaled, so the iterates of u and
/// αu agree up to rounding. `warm` starts from a previous state.
RITVResult ritv_value(const RealImage& u, const RITVEvalParams& params = {}, const RITVState* warm = nullptr);

/// Image of a state under the quarter turn, matching ritv_value(rotate90(u)).
RITVState rotate_ritv_state(const RITVState& s);

/// ‖A‖ for A: (v_s) ↦ Σ_s L*_s v_s on n×n grids (power iteration, cached).
double constraint_operator_norm(std::size_t n);

struct ObjectiveTerms {
  double data_term = 0.0;  // ½‖F_M u − b‖²
  std::size_t l0_count = 0;  // ‖Φu‖₀ with a codebook rebuilt from u
  double l0_term = 0.0;      // η·l0_count
  double l12_term = 0.0;     // λ·Σ_s ‖v_s‖₁,₂
  double constraint_residual = 0.0;  // ‖Σ L*_s v_s − Du‖₂

  double total() const { return data_term + l0_term + l12_term; }
};

/// With count_l0 == false the BM3D analysis is skipped and l0 terms are 0.
ObjectiveTerms objective_value(const RealImage& u, const FieldSet& v, const ComplexImage& b, const SamplingMask& mask,
                               double eta, double lambda, const BM3DParams& bm3d = {}, bool count_l0 = true);

double l12_sum(const FieldSet& v);
double constraint_residual(const RealImage& u, const FieldSet& v);

}  // namespace ritv
