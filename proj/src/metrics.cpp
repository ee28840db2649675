#include "ritv/metrics.hpp"

#include <cmath>
#include <string>

namespace ritv {
namespace {

void check_pair(const RealImage& u, const RealImage& u0, const char* what) {
  if (u.n() != u0.n()) throw DimensionError(std::string(what) + ": image sizes differ");
}

// Index into [0, n) after whole-sample mirror extension: -1 -> 0, n -> n-1.
std::size_t reflect(long i, long n) {
  const long period = 2 * n;
  long m = ((i % period) + period) % period;
  return static_cast<std::size_t>(m < n ? m : period - 1 - m);
}

std::vector<double> gaussian_window(std::size_t size, double sigma) {
  std::vector<double> g(size);
  const double c = (static_cast<double>(size) - 1.0) / 2.0;
  double total = 0.0;
  for (std::size_t k = 0; k < size; ++k) {
    const double x = static_cast<double>(k) - c;
    g[k] = std::exp(-x * x / (2.0 * sigma * sigma));
    total += g[k];
  }
  for (double& x : g) x /= total;
  return g;
}

// Separable weighted average over every fully contained window; output is
// (n - size + 1)² values, row-major.
std::vector<double> valid_filter(const std::vector<double>& a, std::size_t n, const std::vector<double>& g) {
  const std::size_t w = g.size();
  const std::size_t m = n - w + 1;
  std::vector<double> rows(n * m, 0.0), out(m * m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < w; ++k) acc += g[k] * a[i * n + j + k];
      rows[i * m + j] = acc;
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < w; ++k) acc += g[k] * rows[(i + k) * m + j];
      out[i * m + j] = acc;
    }
  return out;
}

}  // namespace

double snr(const RealImage& u, const RealImage& u0) {
  check_pair(u, u0, "snr");
  double signal = 0.0, error = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    signal += u0[k] * u0[k];
    error += (u[k] - u0[k]) * (u[k] - u0[k]);
  }
  if (error == 0.0) return kInfiniteSnr;
  return 10.0 * std::log10(signal / error);
}

double ssim(const RealImage& u, const RealImage& u0) {
  check_pair(u, u0, "ssim");
  constexpr std::size_t kWindow = 11;
  const std::size_t n = u.n();
  if (n < kWindow) throw DimensionError("ssim: image smaller than the 11x11 window");
  const auto g = gaussian_window(kWindow, 1.5);
  constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;

  std::vector<double> x(u.values().begin(), u.values().end()), y(u0.values().begin(), u0.values().end());
  std::vector<double> xx(n * n), yy(n * n), xy(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    xx[k] = x[k] * x[k];
    yy[k] = y[k] * y[k];
    xy[k] = x[k] * y[k];
  }
  const auto mx = valid_filter(x, n, g), my = valid_filter(y, n, g);
  const auto sxx = valid_filter(xx, n, g), syy = valid_filter(yy, n, g), sxy = valid_filter(xy, n, g);
  double total = 0.0;
  for (std::size_t k = 0; k < mx.size(); ++k) {
    const double vx = sxx[k] - mx[k] * mx[k];
    const double vy = syy[k] - my[k] * my[k];
    const double cov = sxy[k] - mx[k] * my[k];
    total += ((2.0 * mx[k] * my[k] + c1) * (2.0 * cov + c2)) /
             ((mx[k] * mx[k] + my[k] * my[k] + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mx.size());
}

std::vector<double> log_kernel(std::size_t size, double sigma) {
  const double c = (static_cast<double>(size) - 1.0) / 2.0;
  const double s2 = sigma * sigma;
  std::vector<double> h(size * size);
  double hmax = 0.0;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      const double x = static_cast<double>(j) - c, y = static_cast<double>(i) - c;
      h[i * size + j] = std::exp(-(x * x + y * y) / (2.0 * s2));
      hmax = std::max(hmax, h[i * size + j]);
    }
  double total = 0.0;
  for (double& v : h) {
    if (v < std::numeric_limits<double>::epsilon() * hmax) v = 0.0;
    total += v;
  }
  std::vector<double> out(h.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      const double x = static_cast<double>(j) - c, y = static_cast<double>(i) - c;
      out[i * size + j] = (h[i * size + j] / total) * (x * x + y * y - 2.0 * s2) / (s2 * s2);
      mean += out[i * size + j];
    }
  mean /= static_cast<double>(out.size());
  for (double& v : out) v -= mean;
  return out;
}

RealImage filter_symmetric(const RealImage& u, const std::vector<double>& kernel) {
  const auto size = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(kernel.size()))));
  if (size * size != kernel.size() || size % 2 == 0) throw ParameterError("filter kernel must be square with odd side");
  const long n = static_cast<long>(u.n());
  const long half = static_cast<long>(size / 2);
  RealImage out(u.n());
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double acc = 0.0;
      for (long a = -half; a <= half; ++a) {
        const std::size_t ri = reflect(i + a, n);
        for (long b = -half; b <= half; ++b) {
          acc += kernel[static_cast<std::size_t>((a + half) * static_cast<long>(size) + b + half)] * u(ri, reflect(j + b, n));
        }
      }
      out(i, j) = acc;
    }
  return out;
}

double hfen(const RealImage& u, const RealImage& u0) {
  check_pair(u, u0, "hfen");
  const auto kernel = log_kernel();
  const double denom = norm_p2(filter_symmetric(u0, kernel), PNorm::Two);
  // The kernel sums to zero only up to rounding, so a flat u0 leaves ~1e-17 residue.
  if (!(denom > 1e-12 * norm_p2(u0, PNorm::Two))) throw ParameterError("hfen: reference has no high-frequency content");
  return norm_p2(filter_symmetric(u - u0, kernel), PNorm::Two) / denom;
}

MetricReport evaluate_metrics(const RealImage& u, const RealImage& u0) {
  return {snr(u, u0), ssim(u, u0), hfen(u, u0)};
}

}  // namespace ritv
