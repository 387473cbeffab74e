#include "nsv/tensor.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace nsv {

SymTensor::SymTensor(int dim) : dim_(dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("tensor dimension must be 1, 2 or 3");
}

SymTensor::SymTensor(int dim, std::initializer_list<double> row_major) : SymTensor(dim) {
  if (static_cast<int>(row_major.size()) != dim * dim)
    throw std::invalid_argument("tensor initializer has wrong length");
  auto it = row_major.begin();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) (*this)(i, j) = *it++;
}

SymTensor SymTensor::identity(int dim) {
  SymTensor t(dim);
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

SymTensor SymTensor::diag(std::initializer_list<double> entries) {
  SymTensor t(static_cast<int>(entries.size()));
  int i = 0;
  for (double e : entries) {
    t(i, i) = e;
    ++i;
  }
  return t;
}

double SymTensor::norm() const { return std::sqrt(contract(*this, *this)); }

double SymTensor::trace() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

double SymTensor::asymmetry() const {
  double a = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) a = std::max(a, std::abs((*this)(i, j) - (*this)(j, i)));
  return a;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  for (std::size_t k = 0; k < m_.size(); ++k) m_[k] += o.m_[k];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  for (std::size_t k = 0; k < m_.size(); ++k) m_[k] -= o.m_[k];
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  for (double& x : m_) x *= s;
  return *this;
}

double contract(const SymTensor& a, const SymTensor& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("tensor dimensions differ");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
  return s;
}

double max_abs_diff(const SymTensor& a, const SymTensor& b) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

SymTensor matmul(const SymTensor& a, const SymTensor& b) {
  SymTensor c(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      double s = 0.0;
      for (int k = 0; k < a.dim(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

SymTensor transpose(const SymTensor& a) {
  SymTensor t(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) t(i, j) = a(j, i);
  return t;
}

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("power-law exponent must satisfy p > 1, got " + std::to_string(p));
}

namespace {

void require_symmetric(const SymTensor& t) {
  const double scale = std::max(1.0, t.norm());
  if (t.asymmetry() > kSymmetryTolerance * scale)
    throw std::invalid_argument("tensor is not symmetric");
}

}  // namespace

SymTensor power_law_stress(const SymTensor& strain, double p) {
  require_exponent(p);
  require_symmetric(strain);
  return power_law_factor(strain.norm(), p) * strain;
}

double monotonicity_gap(const SymTensor& e, const SymTensor& f, double p, const StressMap& stress) {
  if (stress) return contract(stress(e, p) - stress(f, p), e - f);
  return contract(power_law_stress(e, p) - power_law_stress(f, p), e - f);
}

MonotoneBounds check_lemma21(const SymTensor& e, const SymTensor& f, double p, const StressMap& stress) {
  require_exponent(p);
  const double gap = monotonicity_gap(e, f, p, stress);
  const double diff = (e - f).norm();
  MonotoneBounds r;
  if (p >= 2.0) {
    r.lhs = std::pow(2.0, 1.0 - p) * std::pow(diff, p);
    r.rhs = gap;
  } else {
    const double weight_base = std::pow(e.norm(), p) + std::pow(f.norm(), p);
    r.lhs = (p - 1.0) * diff * diff;
    // 0^0 at E = F = 0: both sides vanish.
    r.rhs = weight_base == 0.0 ? 0.0 : gap * std::pow(weight_base, (2.0 - p) / p);
  }
  r.holds = r.lhs <= r.rhs + 1e-12 * std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
  return r;
}

SymTensor fd_sym_gradient(const VectorField& field, int dim, const std::array<double, 3>& x,
                          double h) {
  // Eighth-order central first-derivative weights for offsets 1..4.
  constexpr std::array<double, 4> w{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  SymTensor grad(dim);  // grad(i, j) = d v_i / d x_j
  for (int j = 0; j < dim; ++j) {
    std::array<double, 3> acc{};
    for (int s = 1; s <= 4; ++s) {
      auto xp = x;
      auto xm = x;
      xp[j] += s * h;
      xm[j] -= s * h;
      const auto vp = field(xp);
      const auto vm = field(xm);
      for (int i = 0; i < dim; ++i) acc[i] += w[s - 1] * (vp[i] - vm[i]);
    }
    for (int i = 0; i < dim; ++i) grad(i, j) = acc[i] / h;
  }
  return 0.5 * (grad + transpose(grad));
}

double objectivity_check(const VectorField& field, const SymTensor& rotation,
                         std::vector<std::array<double, 3>> samples) {
  const int dim = rotation.dim();
  const SymTensor qqt = matmul(rotation, transpose(rotation));
  if (max_abs_diff(qqt, SymTensor::identity(dim)) > 1e-10)
    throw std::invalid_argument("frame change is not orthogonal");

  if (samples.empty()) {
    const int per_axis = 5;
    const int total = dim == 2 ? per_axis * per_axis : per_axis * per_axis * per_axis;
    for (int n = 0; n < total; ++n) {
      std::array<double, 3> x{};
      int rem = n;
      for (int a = 0; a < dim; ++a) {
        x[a] = 2.0 * std::numbers::pi * (rem % per_axis + 0.5) / per_axis;
        rem /= per_axis;
      }
      samples.push_back(x);
    }
  }

  const SymTensor qt = transpose(rotation);
  auto apply = [dim](const SymTensor& m, const std::array<double, 3>& y) {
    std::array<double, 3> r{};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) r[i] += m(i, j) * y[j];
    return r;
  };
  const VectorField rotated = [&](const std::array<double, 3>& y) {
    return apply(rotation, field(apply(qt, y)));
  };

  double worst = 0.0;
  for (const auto& x : samples) {
    const SymTensor observed = fd_sym_gradient(rotated, dim, x);
    const SymTensor expected = matmul(matmul(rotation, fd_sym_gradient(field, dim, apply(qt, x))), qt);
    worst = std::max(worst, max_abs_diff(observed, expected));
  }
  return worst;
}

}  // namespace nsv
