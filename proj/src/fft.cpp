#include "ritv/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace ritv {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return it->second;
    const int ni = static_cast<int>(n);
    auto* in = fftw_alloc_complex(n * n);
    auto* out = fftw_alloc_complex(n * n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_2d(ni, ni, in, out, FFTW_FORWARD, flags),
               fftw_plan_dft_2d(ni, ni, in, out, FFTW_BACKWARD, flags)};
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

ComplexImage run(const ComplexImage& w, bool forward) {
  const std::size_t n = w.n();
  ComplexImage out(n);
  if (n == 0) return out;
  const PlanPair p = cache().get(n);
  // FFTW does not modify the input of an out-of-place complex transform.
  auto* in = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(w.data()));
  fftw_execute_dft(forward ? p.forward : p.backward, in, reinterpret_cast<fftw_complex*>(out.data()));
  out *= 1.0 / static_cast<double>(n);
  return out;
}

}  // namespace

ComplexImage fft2(const ComplexImage& w) { return run(w, true); }
ComplexImage ifft2(const ComplexImage& w) { return run(w, false); }

}  // namespace ritv
