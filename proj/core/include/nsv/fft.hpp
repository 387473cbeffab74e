#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <span>

namespace nsv {

using Complex = std::complex<double>;

/// Guards every FFTW planner call; the planner is not re-entrant.
std::mutex& fftw_planner_mutex();

/// Complex-to-complex FFT on a periodic grid of n^dim points.
///
/// Conventions: `to_spectral` returns c_k = N^{-dim} sum_x u(x) e^{-ikx} and
/// `to_physical` evaluates u(x) = sum_k c_k e^{ikx}, so coefficients do not
/// depend on the grid they were computed on.  Plans are created once and
/// are safe to execute from several threads at the same time.
class FourierTransform {
 public:
  FourierTransform(int dim, int n);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  /// Process-wide cache; one immutable plan pair per (dim, n).
  static std::shared_ptr<const FourierTransform> shared(int dim, int n);

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t points() const { return points_; }

  void to_physical(std::span<const Complex> spectral, std::span<Complex> physical) const;
  void to_spectral(std::span<const Complex> physical, std::span<Complex> spectral) const;

 private:
  int dim_;
  int n_;
  std::size_t points_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

}  // namespace nsv
