#include "ritv/functionals.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "ritv/prox.hpp"
#include "ritv/random.hpp"

namespace ritv {
namespace {

FieldSet scaled(const FieldSet& v, double factor) {
  FieldSet out = v;
  for (auto& f : out) f *= factor;
  return out;
}

}  // namespace

double tv_value(const RealImage& u) { return norm_p2(forward_diff(u), PNorm::One); }

void RITVEvalParams::validate() const {
  if (max_iters < 1) throw ParameterError("RITV evaluator needs max_iters >= 1");
  if (!(rel_tol >= 0.0)) throw ParameterError("RITV evaluator rel_tol must be nonnegative");
  if (!(primal_step >= 0.0) || !(dual_step >= 0.0)) throw ParameterError("RITV evaluator steps must be positive");
}

double constraint_operator_norm(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, double> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  Rng rng(n);
  GradientField x(n);
  for (auto& c : x.channel)
    for (double& e : c.values()) e = uniform01(rng) - 0.5;
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double len = norm_p2(x, PNorm::Two);
    if (len == 0.0) break;
    x *= 1.0 / len;
    GradientField y(n);
    for (Stencil s : kStencils) y += apply_L_adjoint(s, apply_L(s, x));
    const double next = inner_product(x, y);
    x = std::move(y);
    if (std::abs(next - lambda) <= 1e-12 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  // Small margin: power iteration approaches the top eigenvalue from below.
  const double norm = 1.01 * std::sqrt(lambda);
  cache.emplace(n, norm);
  return norm;
}

double l12_sum(const FieldSet& v) {
  double acc = 0.0;
  for (const auto& f : v) acc += norm_p2(f, PNorm::One);
  return acc;
}

double constraint_residual(const RealImage& u, const FieldSet& v) {
  GradientField r = sum_L_adjoint(v);
  r -= forward_diff(u);
  return norm_p2(r, PNorm::Two);
}

RITVResult ritv_value(const RealImage& u, const RITVEvalParams& params, const RITVState* warm) {
  params.validate();
  const std::size_t n = u.n();
  const GradientField du = forward_diff(u);
  const double scale = norm_p2(du, PNorm::Inf);
  RITVResult result;
  if (scale == 0.0) {
    result.state = {zero_field_set(n), GradientField(n)};
    result.converged = true;
    return result;
  }
  const GradientField g = (1.0 / scale) * du;
  const double a_norm = constraint_operator_norm(n);
  const double sp = params.primal_step > 0.0 ? params.primal_step : 0.99 / a_norm;
  const double sd = params.dual_step > 0.0 ? params.dual_step : 0.99 / a_norm;

  FieldSet v = warm ? scaled(warm->v, 1.0 / scale) : zero_field_set(n);
  GradientField h = warm ? warm->h : GradientField(n);
  double value = l12_sum(v);
  std::size_t it = 0;
  while (it < params.max_iters) {
    ++it;
    FieldSet next;
    for (Stencil s : kStencils) {
      const std::size_t k = index_of(s);
      GradientField z = v[k];
      z -= sp * apply_L(s, h);
      next[k] = prox_l12(z, sp);
    }
    FieldSet extrapolated;
    for (std::size_t k = 0; k < next.size(); ++k) extrapolated[k] = 2.0 * next[k] - v[k];
    GradientField step = sum_L_adjoint(extrapolated);
    step -= g;
    h += sd * step;
    v = std::move(next);
    const double prev = value;
    value = l12_sum(v);
    if (!std::isfinite(value)) throw std::runtime_error("RITV evaluator diverged");
    // v stays 0 until the multiplier grows past the shrinkage level; not a fixed point.
    if (value > 0.0 && std::abs(value - prev) <= params.rel_tol * value) break;
  }
  GradientField res = sum_L_adjoint(v);
  res -= g;
  result.value = scale * value;
  result.residual = scale * norm_p2(res, PNorm::Two);
  result.iterations = it;
  result.converged = result.residual <= 1e-6 * norm_p2(du, PNorm::Two);
  result.state = {scaled(v, scale), std::move(h)};
  return result;
}

RITVState rotate_ritv_state(const RITVState& s) { return {rotate_field_set(s.v), rotate_gradient(s.h)}; }

ObjectiveTerms objective_value(const RealImage& u, const FieldSet& v, const ComplexImage& b, const SamplingMask& mask,
                               double eta, double lambda, const BM3DParams& bm3d, bool count_l0) {
  if (b.n() != u.n() || mask.n() != u.n()) throw DimensionError("objective_value: size mismatch");
  ObjectiveTerms t;
  const ComplexImage fu = fourier_masked(u, mask);
  double acc = 0.0;
  for (std::size_t k = 0; k < fu.size(); ++k) acc += std::norm(fu[k] - b[k]);
  t.data_term = 0.5 * acc;
  if (count_l0) {
    t.l0_count = analysis(u, build_codebook(u, bm3d)).count_nonzero();
    t.l0_term = eta * static_cast<double>(t.l0_count);
  }
  t.l12_term = lambda * l12_sum(v);
  t.constraint_residual = constraint_residual(u, v);
  return t;
}

}  // namespace ritv
