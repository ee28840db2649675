#include "ritv/prox.hpp"

#include <cmath>
#include <string>

namespace ritv {

GradientField prox_l12(const GradientField& v, double alpha, GroupShrinkVariant variant) {
  if (!(alpha > 0.0)) throw ParameterError("prox_l12: alpha must be positive, got " + std::to_string(alpha));
  GradientField out(v.n());
  for (std::size_t k = 0; k < v.v1().size(); ++k) {
    const double a = v.v1()[k];
    const double b = v.v2()[k];
    const double mag = std::max(std::hypot(a, b), alpha);
    const double keep = variant == GroupShrinkVariant::Moreau ? 1.0 - alpha / mag : 1.0 - 1.0 / mag;
    out.v1()[k] = a * keep;
    out.v2()[k] = b * keep;
  }
  return out;
}

ComplexImage prox_quadratic_linear(const ComplexImage& r, double alpha, const ComplexImage& b) {
  if (!(alpha > 0.0)) {
    throw ParameterError("prox_quadratic_linear: alpha must be positive, got " + std::to_string(alpha));
  }
  r.check_same(b);
  ComplexImage out(r.n());
  const double scale = 1.0 / (1.0 + alpha);
  for (std::size_t k = 0; k < r.size(); ++k) out[k] = (r[k] - alpha * b[k]) * scale;
  return out;
}

std::size_t hard_threshold_inplace(std::span<double> w, double tau) {
  if (!(tau >= 0.0)) throw ParameterError("hard_threshold: tau must be nonnegative, got " + std::to_string(tau));
  const double cut = std::sqrt(2.0 * tau);
  std::size_t kept = 0;
  for (auto& x : w) {
    if (std::abs(x) < cut) {
      x = 0.0;
    } else {
      ++kept;
    }
  }
  return kept;
}

std::vector<double> hard_threshold(std::span<const double> w, double tau) {
  std::vector<double> out(w.begin(), w.end());
  hard_threshold_inplace(out, tau);
  return out;
}

}  // namespace ritv
