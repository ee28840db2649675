#include "ritv/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "ritv/functionals.hpp"
#include "ritv/prox.hpp"

namespace ritv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

void check_inputs(const ComplexImage& b, const SamplingMask& mask, const MonitorOptions& monitor) {
  if (b.n() != mask.n()) throw DimensionError("solver: data and mask sizes differ");
  if (monitor.reference && monitor.reference->n() != b.n()) throw DimensionError("solver: reference size differs");
}

template <typename T>
void require_finite(const T& x, const char* what, std::size_t iter) {
  if (!all_finite(x)) throw SolverAbort(std::string("non-finite values in ") + what, iter);
}

void require_finite(const FieldSet& v, const char* what, std::size_t iter) {
  for (const auto& f : v) require_finite(f, what, iter);
}

double data_term(const RealImage& u, const ComplexImage& b, const SamplingMask& mask) {
  const ComplexImage fu = fourier_masked(u, mask);
  double acc = 0.0;
  for (std::size_t k = 0; k < fu.size(); ++k) acc += std::norm(fu[k] - b[k]);
  return 0.5 * acc;
}

// η‖Φ·‖₀ prox; η·τ == 0 is the identity.
BM3DProxResult u_prox(const RealImage& z, double threshold, const BM3DParams& params, const BM3DCodebook* frozen) {
  if (threshold == 0.0) return {z, 0};
  return bm3d_prox(z, threshold, params, frozen);
}

// λ‖·‖₁,₂ prox; α == 0 is the identity.
GradientField v_prox(const GradientField& z, double alpha) { return alpha == 0.0 ? z : prox_l12(z, alpha); }

class Monitor {
 public:
  Monitor(const MonitorOptions& opts, const ComplexImage& b, const SamplingMask& mask)
      : opts_(opts), b_(b), mask_(mask), start_(Clock::now()) {}

  IterationRecord record(std::size_t iter, const RealImage& u, const FieldSet* v, double lambda) const {
    IterationRecord rec;
    rec.iter = iter;
    rec.data_term = data_term(u, b_, mask_);
    if (v) {
      rec.l12_term = lambda * l12_sum(*v);
      rec.constraint_residual = constraint_residual(u, *v);
    } else {
      rec.constraint_residual = kNaN;
    }
    rec.snr = rec.ssim = rec.hfen = kNaN;
    if (opts_.reference && opts_.metrics != MetricLevel::None) {
      rec.snr = snr(u, *opts_.reference);
      if (opts_.metrics == MetricLevel::All) {
        rec.ssim = ssim(u, *opts_.reference);
        rec.hfen = hfen(u, *opts_.reference);
      }
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return rec;
  }

 private:
  const MonitorOptions& opts_;
  const ComplexImage& b_;
  const SamplingMask& mask_;
  Clock::time_point start_;
};

}  // namespace

std::string_view mp_mode_name(MPMode mode) {
  switch (mode) {
    case MPMode::Full: return "full";
    case MPMode::BM3DOnly: return "bm3d_only";
    case MPMode::RITVOnly: return "ritv_only";
  }
  return "?";
}

MPMode parse_mp_mode(std::string_view name) {
  for (MPMode m : {MPMode::Full, MPMode::BM3DOnly, MPMode::RITVOnly}) {
    if (mp_mode_name(m) == name) return m;
  }
  throw ParameterError("unknown solver mode '" + std::string(name) + "'");
}

void MPConfig::validate() const {
  if (!(eta >= 0.0)) throw ParameterError("eta must be nonnegative");
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be nonnegative");
  if (!(mu > 0.0 && mu < 1.0)) throw ParameterError("linesearch mu must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("linesearch delta must lie in (0, 1)");
  if (!(beta > 0.0)) throw ParameterError("beta must be positive");
  if (!(tau0 > 0.0)) throw ParameterError("tau0 must be positive");
  if (!(step_growth >= 0.0 && step_growth <= 1.0)) throw ParameterError("step_growth must lie in [0, 1]");
  if (!(rel_change_tol >= 0.0)) throw ParameterError("rel_change_tol must be nonnegative");
  if (max_iters < 1) throw ParameterError("max_iters must be at least 1");
  bm3d.validate();
}

void GADMMConfig::validate() const {
  if (!(mu > 0.0)) throw ParameterError("GADMM mu must be positive");
  if (!(tau >= 0.0)) throw ParameterError("GADMM tau must be nonnegative");
  // ‖D‖² ≤ 8 and ‖F_M‖ ≤ 1 bound the linearized u-step.
  if (step() * (8.0 + mu) > 1.0 + 1e-12) throw ParameterError("GADMM tau exceeds 1/(8+mu)");
  if (!(gamma > 0.0 && gamma <= 0.25)) throw ParameterError("GADMM gamma must lie in (0, 1/4]");
  if (!(eta >= 0.0) || !(lambda >= 0.0)) throw ParameterError("GADMM eta and lambda must be nonnegative");
  if (max_iters < 1) throw ParameterError("max_iters must be at least 1");
  bm3d.validate();
}

ReconResult malitsky_pock(const ComplexImage& b, const SamplingMask& mask, const MPConfig& cfg,
                          const MonitorOptions& monitor) {
  cfg.validate();
  check_inputs(b, mask, monitor);
  const std::size_t n = b.n();
  const bool with_bm3d = cfg.mode != MPMode::RITVOnly;
  const bool with_ritv = cfg.mode != MPMode::BM3DOnly;
  const double eta = with_bm3d ? cfg.eta : 0.0;
  const double sqrt_beta = std::sqrt(cfg.beta);
  const Monitor mon(monitor, b, mask);

  ReconResult out;
  RealImage u = fourier_masked_adjoint(b, mask);
  FieldSet v = zero_field_set(n);
  ComplexImage r(n);
  GradientField h(n);
  double tau_prev = cfg.tau0;
  double theta_prev = 1.0;

  BM3DCodebook frozen;
  if (cfg.freeze_codebook && with_bm3d) frozen = build_codebook(u, cfg.bm3d);
  const BM3DCodebook* frozen_ptr = cfg.freeze_codebook ? &frozen : nullptr;

  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    // Primal step at the previous step size.
    RealImage grad = fourier_masked_adjoint(r, mask);
    if (with_ritv) grad -= forward_diff_adjoint(h);
    auto prox = u_prox(u - tau_prev * grad, eta * tau_prev, cfg.bm3d, frozen_ptr);
    RealImage u_new = std::move(prox.image);
    require_finite(u_new, "u", k);
    FieldSet v_new = v;
    if (with_ritv) {
      for (Stencil s : kStencils) {
        const std::size_t i = index_of(s);
        GradientField z = v[i];
        z -= tau_prev * apply_L(s, h);
        v_new[i] = v_prox(z, tau_prev * cfg.lambda);
      }
      require_finite(v_new, "v", k);
    }

    // Dual step with backtracking.
    double tau = tau_prev * (1.0 + cfg.step_growth * (std::sqrt(1.0 + theta_prev) - 1.0));
    const RealImage u_diff = u_new - u;
    FieldSet v_diff;
    if (with_ritv)
      for (std::size_t i = 0; i < v.size(); ++i) v_diff[i] = v_new[i] - v[i];
    ComplexImage r_new;
    GradientField h_new;
    double theta = 1.0;
    std::size_t backtracks = 0;
    for (;;) {
      theta = tau / tau_prev;
      const double bt = cfg.beta * tau;
      const RealImage u_bar = u_new + theta * u_diff;
      ComplexImage shifted = fourier_masked(u_bar, mask);
      for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = r[i] + bt * shifted[i];
      r_new = prox_quadratic_linear(shifted, bt, b);
      ComplexImage dr = r_new - r;

      RealImage kt_u = fourier_masked_adjoint(dr, mask);
      double change_sq = real_inner_product(dr, dr);
      double step_sq = 0.0;
      if (with_ritv) {
        FieldSet v_bar;
        for (std::size_t i = 0; i < v.size(); ++i) v_bar[i] = v_new[i] + theta * v_diff[i];
        GradientField coupling = sum_L_adjoint(v_bar);
        coupling -= forward_diff(u_bar);
        h_new = h + bt * coupling;
        const GradientField dh = h_new - h;
        kt_u -= forward_diff_adjoint(dh);
        change_sq += inner_product(dh, dh);
        for (Stencil s : kStencils) {
          const GradientField lh = apply_L(s, dh);
          step_sq += inner_product(lh, lh);
        }
      }
      step_sq += inner_product(kt_u, kt_u);

      LinesearchTrial trial{k, tau, theta, std::sqrt(step_sq), std::sqrt(change_sq), false};
      trial.accepted = sqrt_beta * tau * trial.dual_step_norm <= cfg.delta * trial.dual_change_norm;
      out.trials.push_back(trial);
      if (trial.accepted) break;
      if (++backtracks > cfg.max_backtracks) {
        throw SolverAbort("linesearch exceeded " + std::to_string(cfg.max_backtracks) + " backtracks", k);
      }
      tau *= cfg.mu;
    }
    require_finite(r_new, "r", k);
    if (with_ritv) require_finite(h_new, "h", k);

    const double change = norm_p2(u_diff, PNorm::Two);
    u = std::move(u_new);
    r = std::move(r_new);
    if (with_ritv) {
      v = std::move(v_new);
      h = std::move(h_new);
    }
    tau_prev = tau;
    theta_prev = theta;
    out.total_backtracks += backtracks;

    IterationRecord rec = mon.record(k, u, with_ritv ? &v : nullptr, cfg.lambda);
    rec.tau = tau;
    rec.theta = theta;
    rec.backtracks = backtracks;
    rec.l0_count = prox.kept;
    out.log.push_back(rec);

    if (cfg.rel_change_tol > 0.0 && change <= cfg.rel_change_tol * norm_p2(u, PNorm::Two)) {
      out.converged = true;
      break;
    }
  }
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

ReconResult mp_variant(const ComplexImage& b, const SamplingMask& mask, MPConfig cfg, MPMode mode,
                       const MonitorOptions& monitor) {
  cfg.mode = mode;
  return malitsky_pock(b, mask, cfg, monitor);
}

ReconResult gadmm(const ComplexImage& b, const SamplingMask& mask, const GADMMConfig& cfg,
                  const MonitorOptions& monitor) {
  cfg.validate();
  check_inputs(b, mask, monitor);
  const std::size_t n = b.n();
  const double tau = cfg.step();
  const double mu = cfg.mu;
  const double v_step = cfg.variant == GADMMVariant::Linearized ? cfg.gamma : 1.0;
  const Monitor mon(monitor, b, mask);

  ReconResult out;
  RealImage u = fourier_masked_adjoint(b, mask);
  FieldSet v = zero_field_set(n);
  GradientField xi(n);

  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    GradientField c = forward_diff(u);
    c -= sum_L_adjoint(v);
    c += mu * xi;
    ComplexImage misfit = fourier_masked(u, mask);
    misfit -= b;
    RealImage z = u - tau * forward_diff_adjoint(c);
    z -= (tau * mu) * fourier_masked_adjoint(misfit, mask);
    auto prox = u_prox(z, tau * mu * cfg.eta, cfg.bm3d, nullptr);
    u = std::move(prox.image);
    require_finite(u, "u", k);

    const GradientField du = forward_diff(u);
    GradientField c2 = du;
    c2 -= sum_L_adjoint(v);
    c2 += mu * xi;
    for (Stencil s : kStencils) {
      const std::size_t i = index_of(s);
      GradientField arg = v[i];
      arg += v_step * apply_L(s, c2);
      v[i] = v_prox(arg, cfg.gamma * mu * cfg.lambda);
    }
    require_finite(v, "v", k);

    GradientField gap = du;
    gap -= sum_L_adjoint(v);
    xi += (1.0 / mu) * gap;
    require_finite(xi, "xi", k);

    IterationRecord rec = mon.record(k, u, &v, cfg.lambda);
    rec.tau = tau;
    rec.theta = kNaN;
    rec.l0_count = prox.kept;
    out.log.push_back(rec);
  }
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

std::size_t audit_linesearch(const std::vector<LinesearchTrial>& trials, double beta, double delta, double mu) {
  std::size_t violations = 0;
  const double sqrt_beta = std::sqrt(beta);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    const bool holds = sqrt_beta * t.tau * t.dual_step_norm <= delta * t.dual_change_norm;
    if (t.accepted != holds) ++violations;
    const bool last = i + 1 == trials.size() || trials[i + 1].iter != t.iter;
    if (!t.accepted) {
      if (last || trials[i + 1].tau != t.tau * mu) ++violations;
    } else if (!last) {
      ++violations;  // an accepted trial ends its iteration
    }
  }
  return violations;
}

void write_log_csv(std::ostream& out, const std::vector<IterationRecord>& log) {
  out << "iter,tau,theta,backtracks,data_term,l0_count,l12_term,constraint_residual,snr,ssim,hfen,wall_ms\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : log) {
    out << r.iter << ',' << r.tau << ',' << r.theta << ',' << r.backtracks << ',' << r.data_term << ',' << r.l0_count
        << ',' << r.l12_term << ',' << r.constraint_residual << ',' << r.snr << ',' << r.ssim << ',' << r.hfen << ','
        << std::setprecision(6) << r.wall_ms << std::setprecision(17) << '\n';
  }
  out.precision(old_precision);
}

double snr_drop(const std::vector<IterationRecord>& log) {
  if (log.empty()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : log) best = std::max(best, r.snr);
  return best - log.back().snr;
}

}  // namespace ritv
