#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nsv {

/// Dense d x d tensor (d = 1, 2 or 3) with row-major storage.
///
/// The class is used for strain rates and stresses.  Symmetry is not
/// enforced on construction; the constitutive operations check it and
/// reject non-symmetric input.
class SymTensor {
 public:
  SymTensor() = default;
  explicit SymTensor(int dim);
  SymTensor(int dim, std::initializer_list<double> row_major);

  static SymTensor identity(int dim);
  static SymTensor diag(std::initializer_list<double> entries);

  int dim() const { return dim_; }

  double& operator()(int i, int j) { return m_[3 * i + j]; }
  double operator()(int i, int j) const { return m_[3 * i + j]; }

  /// Frobenius norm sqrt(E:E).
  double norm() const;
  double trace() const;
  /// Largest |a_ij - a_ji|.
  double asymmetry() const;

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double s);

  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(double s, SymTensor a) { return a *= s; }
  friend SymTensor operator*(SymTensor a, double s) { return a *= s; }

 private:
  int dim_ = 0;
  std::array<double, 9> m_{};
};

/// Double contraction E:F.
double contract(const SymTensor& a, const SymTensor& b);

/// Largest absolute entry of a - b.
double max_abs_diff(const SymTensor& a, const SymTensor& b);

/// Product a * b (plain matrix product, not necessarily symmetric).
SymTensor matmul(const SymTensor& a, const SymTensor& b);
SymTensor transpose(const SymTensor& a);

/// Scalar factor |D|^{p-2} of the power-law map, with the continuous
/// extension 0 at D = 0.  Shared by the pointwise kernels of the solver.
inline double power_law_factor(double norm, double p) {
  if (norm == 0.0) return 0.0;
  if (p == 2.0) return 1.0;
  return std::pow(norm, p - 2.0);
}

constexpr double kSymmetryTolerance = 1e-10;

/// A(D) = |D|^{p-2} D.  A(0) = 0 for every p > 1.
SymTensor power_law_stress(const SymTensor& strain, double p);

/// Constitutive map (D, p) -> stress; power_law_stress unless a caller
/// substitutes another map to probe the checks themselves.
using StressMap = std::function<SymTensor(const SymTensor&, double)>;

/// (A(E) - A(F)) : (E - F), nonnegative for p > 1.
double monotonicity_gap(const SymTensor& e, const SymTensor& f, double p, const StressMap& stress = {});

struct MonotoneBounds {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// Evaluates the two-sided p-Laplacian inequality for the pair (E, F):
///   p >= 2:     2^{1-p} |E-F|^p           <= gap
///   1 < p < 2:  (p-1) |E-F|^2 <= gap * (|E|^p + |F|^p)^{(2-p)/p}
/// `holds` is decided with a relative slack of 1e-12 on the larger side.
MonotoneBounds check_lemma21(const SymTensor& e, const SymTensor& f, double p, const StressMap& stress = {});

using VectorField = std::function<std::array<double, 3>(const std::array<double, 3>&)>;

/// Symmetric gradient of a pointwise field at x by eighth-order central
/// differences with step h.
SymTensor fd_sym_gradient(const VectorField& field, int dim, const std::array<double, 3>& x,
                          double h = 1e-2);

/// Max-norm discrepancy between D(v*) at x and Q D(v)(Q^T x) Q^T, where
/// v*(x) = Q v(Q^T x) is the field observed in the rotated frame.  Samples
/// are the given points; an empty list uses a 5^d lattice on [0, 2 pi)^d.
double objectivity_check(const VectorField& field, const SymTensor& rotation,
                         std::vector<std::array<double, 3>> samples = {});

void require_exponent(double p);

}  // namespace nsv
