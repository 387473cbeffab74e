#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "nsv/fft.hpp"
#include "nsv/tensor.hpp"

namespace nsv {

/// Periodic box [0, L)^dim resolved by `modes` collocation points per axis.
///
/// Wavenumbers live on the integer lattice in FFT order
/// (0, 1, ..., M/2-1, -M/2, ..., -1); the physical wavevector is
/// (2 pi / L) k.  The Nyquist plane k_i = -M/2 is kept at zero in every
/// field so that real fields stay exactly conjugate symmetric.
class TorusGrid {
 public:
  TorusGrid(int dim, int modes, double length = 2.0 * std::numbers::pi);

  int dim() const { return dim_; }
  int modes() const { return modes_; }
  double length() const { return length_; }
  double volume() const;
  std::size_t points() const { return points_; }
  /// Points per axis of the 3/2-padded grid used for nonlinear products.
  int padded_modes() const { return (3 * modes_ + 1) / 2; }
  double wavenumber_unit() const { return 2.0 * std::numbers::pi / length_; }
  /// Largest shell index |k|_inf held without the Nyquist plane.
  int max_shell() const { return modes_ / 2 - 1; }

  std::array<int, 3> lattice(std::size_t flat) const;
  std::array<double, 3> wavevector(std::size_t flat) const;
  double wavenumber_sq(std::size_t flat) const;
  bool is_nyquist(std::size_t flat) const;
  int shell(std::size_t flat) const;
  /// Index of lattice point k; requires |k_i| < M/2.
  std::size_t flat_index(const std::array<int, 3>& k) const;
  std::array<double, 3> point(std::size_t flat) const;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.dim_ == b.dim_ && a.modes_ == b.modes_ && a.length_ == b.length_;
  }

 private:
  int dim_;
  int modes_;
  double length_;
  std::size_t points_;
};

/// Fourier coefficients of a real velocity field, component-major.
class SpectralVelocity {
 public:
  explicit SpectralVelocity(TorusGrid grid);

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  std::size_t points() const { return grid_.points(); }

  std::span<Complex> component(int c);
  std::span<const Complex> component(int c) const;
  Complex& at(int c, std::size_t flat) { return coeffs_[c * points() + flat]; }
  Complex at(int c, std::size_t flat) const { return coeffs_[c * points() + flat]; }
  std::vector<Complex>& coeffs() { return coeffs_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  SpectralVelocity& operator+=(const SpectralVelocity& o);
  SpectralVelocity& operator-=(const SpectralVelocity& o);
  SpectralVelocity& operator*=(double s);
  /// this += s * o
  SpectralVelocity& axpy(double s, const SpectralVelocity& o);

  friend SpectralVelocity operator+(SpectralVelocity a, const SpectralVelocity& b) { return a += b; }
  friend SpectralVelocity operator-(SpectralVelocity a, const SpectralVelocity& b) { return a -= b; }
  friend SpectralVelocity operator*(double s, SpectralVelocity a) { return a *= s; }

 private:
  TorusGrid grid_;
  std::vector<Complex> coeffs_;
};

/// d x d tensor field sampled on the collocation grid.
class StressField {
 public:
  StressField(int dim, std::size_t points);

  int dim() const { return dim_; }
  std::size_t points() const { return points_; }
  std::span<double> component(int i, int j);
  std::span<const double> component(int i, int j) const;
  SymTensor at(std::size_t flat) const;

 private:
  int dim_;
  std::size_t points_;
  std::vector<double> entries_;
};

using ScalarField = std::vector<double>;
using SpectralScalar = std::vector<Complex>;

/// Moves resolved coefficients onto the 3/2-padded grid and back.  The
/// caller supplies scratch buffers of `padded_points()` entries.
class Padding {
 public:
  explicit Padding(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  int padded_modes() const { return grid_.padded_modes(); }
  std::size_t padded_points() const { return fft_->points(); }
  double padded_volume() const { return grid_.volume(); }

  /// coarse coefficients -> values on the padded grid (complex, imag ~ 0).
  void to_physical(std::span<const Complex> coarse, std::span<Complex> scratch,
                   std::span<Complex> physical) const;
  /// padded values -> coarse coefficients; modes beyond the Nyquist-free
  /// range are discarded.
  void to_spectral(std::span<const Complex> physical, std::span<Complex> scratch,
                   std::span<Complex> coarse) const;

 private:
  TorusGrid grid_;
  std::shared_ptr<const FourierTransform> fft_;
  std::vector<std::size_t> coarse_to_padded_;  // npos on the Nyquist plane
};

// -- field construction --------------------------------------------------

using PointFunction = std::function<std::array<double, 3>(const std::array<double, 3>&)>;

/// Samples f on the collocation grid and transforms (no projection).
SpectralVelocity sample_velocity(const TorusGrid& grid, const PointFunction& f);

/// amplitude * (sin x cos y, -cos x sin y[, 0]) scaled to the box.
SpectralVelocity taylor_green(const TorusGrid& grid, double amplitude = 1.0);

/// Arnold-Beltrami-Childress flow (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x).
SpectralVelocity abc_flow(const TorusGrid& grid, double a, double b, double c);

/// Random divergence-free field supported in shells 1..max_shell, zero
/// mean, scaled to unit L^2 norm times `amplitude`.
SpectralVelocity random_velocity(const TorusGrid& grid, int max_shell, double amplitude,
                                 std::uint64_t seed);

// -- projections ----------------------------------------------------------

/// Removes the component of each coefficient along k; the mean mode is kept.
SpectralVelocity leray_project(SpectralVelocity u);
void leray_project_inplace(SpectralVelocity& u);

/// Zeroes every coefficient with |k|_inf > n.  Rejects n = 0.
SpectralVelocity truncate(SpectralVelocity u, int n);
void truncate_inplace(SpectralVelocity& u, int n);

/// Clears the Nyquist plane.
void clear_nyquist(SpectralVelocity& u);

// -- transforms and differential operators ---------------------------------

std::vector<ScalarField> to_collocation(const SpectralVelocity& u);
SpectralVelocity from_collocation(const TorusGrid& grid, const std::vector<ScalarField>& comps);
ScalarField scalar_to_collocation(const TorusGrid& grid, const SpectralScalar& s);
SpectralScalar scalar_from_collocation(const TorusGrid& grid, const ScalarField& f);

/// D(u) = (grad u + grad u^T) / 2 on the collocation grid.
StressField sym_gradient(const SpectralVelocity& u);
/// grad u with entry (i, j) = d u_i / d x_j.
StressField gradient(const SpectralVelocity& u);

/// Product of two fields evaluated on the 3/2-padded grid and truncated
/// back to the resolved modes, i.e. exact for every retained wavenumber.
SpectralScalar dealiased_product(const TorusGrid& grid, std::span<const Complex> a,
                                 std::span<const Complex> b);
SpectralScalar dealiased_product(const TorusGrid& grid, const ScalarField& a, const ScalarField& b);

/// Values of u on the 3/2-padded grid, one real array per component.
std::vector<ScalarField> padded_values(const SpectralVelocity& u);
/// d u_i / d x_j on the padded grid, stored at index i * dim + j.
std::vector<ScalarField> padded_gradient(const SpectralVelocity& u);
ScalarField padded_scalar(const TorusGrid& grid, std::span<const Complex> s);

// -- norms -----------------------------------------------------------------

/// Integral of u . conj(w) over the box (real part).
double inner(const SpectralVelocity& u, const SpectralVelocity& w);
double l2_norm_sq(const SpectralVelocity& u);
/// ||grad u||_2^2 = vol * sum |k|^2 |u_k|^2.
double grad_norm_sq(const SpectralVelocity& u);
/// Largest |k . u_k| over all wavenumbers.
double max_divergence(const SpectralVelocity& u);
/// Largest |u_{-k} - conj(u_k)|.
double reality_defect(const SpectralVelocity& u);
/// Coefficient-space max |a - b|.
double max_coeff_diff(const SpectralVelocity& a, const SpectralVelocity& b);

/// Equal-weight quadrature of |f|^q over a box of the given volume from
/// pointwise magnitudes on any uniform grid.
double power_integral(double volume, std::span<const double> magnitudes, double q);

}  // namespace nsv
