#pragma once

// Reconstruction algorithms for
//   min ½‖F_M u − b‖² + η‖Φu‖₀ + λ Σ_s ‖v_s‖₁,₂  s.t.  Σ_s L*_s v_s = Du.
//
// malitsky_pock: primal-dual iteration with a backtracking linesearch on the
// dual step (dual variables r for the data term, h for the constraint).
// gadmm: linearized ADMM with multiplier ξ for the same constraint.

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ritv/bm3d.hpp"
#include "ritv/grid.hpp"
#include "ritv/metrics.hpp"
#include "ritv/operators.hpp"

namespace ritv {

/// Raised when a solver cannot continue (non-finite iterate, linesearch
/// exhausted). Carries the iteration at which it happened.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, std::size_t iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

enum class MPMode { Full, BM3DOnly, RITVOnly };

std::string_view mp_mode_name(MPMode mode);
MPMode parse_mp_mode(std::string_view name);

struct MPConfig {
  double eta = 0.2;
  double lambda = 1e-3 / 7.0;
  double mu = 0.7;  // backtracking factor
  double delta = 0.99;
  double beta = 0.016;
  double tau0 = 8.0 / 7.0;
  std::size_t max_iters = 100;
  std::size_t max_backtracks = 50;
  /// Position of the trial step in [τ_{k−1}, τ_{k−1}√(1+θ_{k−1})]; 1 = upper end.
  double step_growth = 1.0;
  /// Stop once ‖u^k − u^{k−1}‖ ≤ tol·‖u^k‖; 0 disables.
  double rel_change_tol = 1e-8;
  MPMode mode = MPMode::Full;
  BM3DParams bm3d;
  /// Build the codebook once from u_zf instead of at every iteration.
  bool freeze_codebook = false;

  void validate() const;
};

/// Which v-update GADMM applies. Linearized scales the correction by γ, the
/// stable form of linearized ADMM; AsPrinted applies the unscaled correction.
enum class GADMMVariant { Linearized, AsPrinted };

struct GADMMConfig {
  double mu = 1e4;
  double tau = 0.0;  // 0 selects 1/(8+μ)
  double gamma = 0.25;
  double eta = 0.2;
  double lambda = 1e-3 / 7.0;
  std::size_t max_iters = 300;
  GADMMVariant variant = GADMMVariant::Linearized;
  BM3DParams bm3d;

  double step() const { return tau > 0.0 ? tau : 1.0 / (8.0 + mu); }
  void validate() const;
};

enum class MetricLevel { None, SnrOnly, All };

struct MonitorOptions {
  const RealImage* reference = nullptr;
  MetricLevel metrics = MetricLevel::All;
};

/// One line of the iterate log. Metrics are NaN when not computed.
struct IterationRecord {
  std::size_t iter = 0;
  double tau = 0.0;
  double theta = 0.0;
  std::size_t backtracks = 0;
  double data_term = 0.0;
  std::size_t l0_count = 0;  // coefficients kept by the BM3D prox this iteration
  double l12_term = 0.0;     // λ Σ_s ‖v_s‖₁,₂
  double constraint_residual = 0.0;
  double snr = 0.0;
  double ssim = 0.0;
  double hfen = 0.0;
  double wall_ms = 0.0;
};

/// One evaluation of the linesearch acceptance test.
struct LinesearchTrial {
  std::size_t iter = 0;
  double tau = 0.0;
  double theta = 0.0;
  double dual_step_norm = 0.0;    // ‖K*(Δy)‖
  double dual_change_norm = 0.0;  // ‖Δy‖
  bool accepted = false;
};

struct ReconResult {
  RealImage u;
  FieldSet v;
  std::vector<IterationRecord> log;
  std::vector<LinesearchTrial> trials;  // empty for GADMM
  bool converged = false;  // stopped by the relative-change test
  std::size_t total_backtracks = 0;
};

ReconResult malitsky_pock(const ComplexImage& b, const SamplingMask& mask, const MPConfig& cfg,
                          const MonitorOptions& monitor = {});

/// malitsky_pock with cfg.mode overridden.
ReconResult mp_variant(const ComplexImage& b, const SamplingMask& mask, MPConfig cfg, MPMode mode,
                       const MonitorOptions& monitor = {});

ReconResult gadmm(const ComplexImage& b, const SamplingMask& mask, const GADMMConfig& cfg,
                  const MonitorOptions& monitor = {});

/// Counts trials violating √β·τ·‖K*Δy‖ ≤ δ‖Δy‖ when accepted, or whose
/// successor in the same iteration does not use τ·μ after a rejection.
std::size_t audit_linesearch(const std::vector<LinesearchTrial>& trials, double beta, double delta, double mu);

/// The iterate log as CSV with a header row.
void write_log_csv(std::ostream& out, const std::vector<IterationRecord>& log);

/// max over iterations of SNR minus final SNR.
double snr_drop(const std::vector<IterationRecord>& log);

}  // namespace ritv
