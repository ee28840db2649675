#pragma once

// Square image grids and the ℓp,2 norms used throughout the reconstruction
// code. Pixel formulas in comments use 1-based (i, j) indices, i selecting the
// row; storage is row-major and 0-based.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ritv {

using Complex = std::complex<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  explicit Grid(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}
  Grid(std::size_t n, std::vector<T> data) : n_(n), data_(std::move(data)) {
    if (data_.size() != n_ * n_) {
      throw DimensionError("grid data must hold n*n = " + std::to_string(n_ * n_) +
                           " values, got " + std::to_string(data_.size()));
    }
  }

  std::size_t n() const { return n_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  Grid& operator+=(const Grid& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Grid& operator-=(const Grid& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Grid& operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Grid operator+(Grid a, const Grid& b) { return a += b; }
  friend Grid operator-(Grid a, const Grid& b) { return a -= b; }
  friend Grid operator*(double s, Grid a) { return a *= s; }
  friend Grid operator-(Grid a) { return a *= -1.0; }
  friend bool operator==(const Grid&, const Grid&) = default;

  void check_same(const Grid& o) const {
    if (o.n_ != n_) {
      throw DimensionError("grid size mismatch: " + std::to_string(n_) + " vs " +
                           std::to_string(o.n_));
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using RealImage = Grid<double>;
using ComplexImage = Grid<Complex>;

/// Pair (v1, v2) of n×n grids. v1 holds differences along i, located at
/// (i+½, j); v2 holds differences along j, located at (i, j+½). Consumers
/// read v1(n, ·) and v2(·, n) as zero.
struct GradientField {
  std::array<RealImage, 2> channel;

  GradientField() = default;
  explicit GradientField(std::size_t n) : channel{RealImage(n), RealImage(n)} {}
  GradientField(RealImage v1, RealImage v2) : channel{std::move(v1), std::move(v2)} {
    channel[0].check_same(channel[1]);
  }

  std::size_t n() const { return channel[0].n(); }
  RealImage& v1() { return channel[0]; }
  RealImage& v2() { return channel[1]; }
  const RealImage& v1() const { return channel[0]; }
  const RealImage& v2() const { return channel[1]; }

  GradientField& operator+=(const GradientField& o) {
    channel[0] += o.channel[0];
    channel[1] += o.channel[1];
    return *this;
  }
  GradientField& operator-=(const GradientField& o) {
    channel[0] -= o.channel[0];
    channel[1] -= o.channel[1];
    return *this;
  }
  GradientField& operator*=(double s) {
    channel[0] *= s;
    channel[1] *= s;
    return *this;
  }
  friend GradientField operator+(GradientField a, const GradientField& b) { return a += b; }
  friend GradientField operator-(GradientField a, const GradientField& b) { return a -= b; }
  friend GradientField operator*(double s, GradientField a) { return a *= s; }
  friend bool operator==(const GradientField&, const GradientField&) = default;
};

/// Binary k-space selector stored in DFT order: entry (1, 1) is the zero
/// frequency and index k along an axis represents frequency k-1 (mod n).
class SamplingMask {
 public:
  SamplingMask() = default;
  explicit SamplingMask(std::size_t n, bool fill = false) : grid_(n, fill ? 1 : 0) {}
  explicit SamplingMask(Grid<std::uint8_t> grid);

  std::size_t n() const { return grid_.n(); }
  bool operator()(std::size_t i, std::size_t j) const { return grid_(i, j) != 0; }
  void set(std::size_t i, std::size_t j, bool on) { grid_(i, j) = on ? 1 : 0; }
  bool operator[](std::size_t k) const { return grid_[k] != 0; }

  std::size_t count() const;
  /// Fraction of sampled locations, #samples / n².
  double rate() const;
  const Grid<std::uint8_t>& grid() const { return grid_; }

  friend bool operator==(const SamplingMask&, const SamplingMask&) = default;

 private:
  Grid<std::uint8_t> grid_;
};

enum class PNorm { One, Two, Inf };

double norm_p2(std::span<const RealImage> z, PNorm p);
double norm_p2(const GradientField& v, PNorm p);
double norm_p2(const RealImage& u, PNorm p);

double norm2(const ComplexImage& z);

double inner_product(const RealImage& a, const RealImage& b);
double inner_product(const GradientField& a, const GradientField& b);
Complex inner_product(const ComplexImage& a, const ComplexImage& b);
/// Real inner product on the complexification: Re Σ conj(a)·b.
double real_inner_product(const ComplexImage& a, const ComplexImage& b);

bool all_finite(const RealImage& u);
bool all_finite(const ComplexImage& z);
bool all_finite(const GradientField& v);

RealImage real_part(const ComplexImage& z);
ComplexImage to_complex(const RealImage& u);

}  // namespace ritv
