#include "nsv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace nsv {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

int signed_index(int idx, int n) { return idx < (n + 1) / 2 ? idx : idx - n; }

}  // namespace

// ---------------------------------------------------------------------------
// TorusGrid

TorusGrid::TorusGrid(int dim, int modes, double length) : dim_(dim), modes_(modes), length_(length) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("torus dimension must be 2 or 3");
  if (modes < 4 || modes % 2 != 0)
    throw std::invalid_argument("modes per axis must be an even integer >= 4");
  if (!(length > 0.0)) throw std::invalid_argument("box length must be positive");
  points_ = 1;
  for (int a = 0; a < dim; ++a) points_ *= static_cast<std::size_t>(modes);
}

double TorusGrid::volume() const { return std::pow(length_, dim_); }

std::array<int, 3> TorusGrid::lattice(std::size_t flat) const {
  std::array<int, 3> k{};
  for (int a = dim_ - 1; a >= 0; --a) {
    k[a] = signed_index(static_cast<int>(flat % modes_), modes_);
    flat /= modes_;
  }
  return k;
}

std::array<double, 3> TorusGrid::wavevector(std::size_t flat) const {
  const auto k = lattice(flat);
  const double unit = wavenumber_unit();
  return {unit * k[0], unit * k[1], unit * k[2]};
}

double TorusGrid::wavenumber_sq(std::size_t flat) const {
  const auto k = wavevector(flat);
  return k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
}

bool TorusGrid::is_nyquist(std::size_t flat) const {
  const auto k = lattice(flat);
  for (int a = 0; a < dim_; ++a)
    if (k[a] == -modes_ / 2) return true;
  return false;
}

int TorusGrid::shell(std::size_t flat) const {
  const auto k = lattice(flat);
  int s = 0;
  for (int a = 0; a < dim_; ++a) s = std::max(s, std::abs(k[a]));
  return s;
}

std::size_t TorusGrid::flat_index(const std::array<int, 3>& k) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    if (std::abs(k[a]) >= modes_ / 2) throw std::out_of_range("wavenumber outside grid");
    flat = flat * modes_ + static_cast<std::size_t>(k[a] >= 0 ? k[a] : k[a] + modes_);
  }
  return flat;
}

std::array<double, 3> TorusGrid::point(std::size_t flat) const {
  std::array<double, 3> x{};
  const double h = length_ / modes_;
  for (int a = dim_ - 1; a >= 0; --a) {
    x[a] = h * static_cast<double>(flat % modes_);
    flat /= modes_;
  }
  return x;
}

// ---------------------------------------------------------------------------
// SpectralVelocity / StressField

SpectralVelocity::SpectralVelocity(TorusGrid grid)
    : grid_(grid), coeffs_(static_cast<std::size_t>(grid.dim()) * grid.points()) {}

std::span<Complex> SpectralVelocity::component(int c) {
  return {coeffs_.data() + c * points(), points()};
}

std::span<const Complex> SpectralVelocity::component(int c) const {
  return {coeffs_.data() + c * points(), points()};
}

SpectralVelocity& SpectralVelocity::operator+=(const SpectralVelocity& o) { return axpy(1.0, o); }

SpectralVelocity& SpectralVelocity::operator-=(const SpectralVelocity& o) { return axpy(-1.0, o); }

SpectralVelocity& SpectralVelocity::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralVelocity& SpectralVelocity::axpy(double s, const SpectralVelocity& o) {
  if (!(o.grid_ == grid_)) throw std::invalid_argument("velocity fields live on different grids");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
  return *this;
}

StressField::StressField(int dim, std::size_t points)
    : dim_(dim), points_(points), entries_(static_cast<std::size_t>(dim * dim) * points) {}

std::span<double> StressField::component(int i, int j) {
  return {entries_.data() + (i * dim_ + j) * points_, points_};
}

std::span<const double> StressField::component(int i, int j) const {
  return {entries_.data() + (i * dim_ + j) * points_, points_};
}

SymTensor StressField::at(std::size_t flat) const {
  SymTensor t(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t(i, j) = entries_[(i * dim_ + j) * points_ + flat];
  return t;
}

// ---------------------------------------------------------------------------
// Padding

Padding::Padding(const TorusGrid& grid)
    : grid_(grid), fft_(FourierTransform::shared(grid.dim(), grid.padded_modes())) {
  const int n = grid.padded_modes();
  coarse_to_padded_.resize(grid.points());
  for (std::size_t f = 0; f < grid.points(); ++f) {
    if (grid.is_nyquist(f)) {
      coarse_to_padded_[f] = kNone;
      continue;
    }
    const auto k = grid.lattice(f);
    std::size_t idx = 0;
    for (int a = 0; a < grid.dim(); ++a) idx = idx * n + static_cast<std::size_t>(k[a] >= 0 ? k[a] : k[a] + n);
    coarse_to_padded_[f] = idx;
  }
}

void Padding::to_physical(std::span<const Complex> coarse, std::span<Complex> scratch,
                          std::span<Complex> physical) const {
  std::fill(scratch.begin(), scratch.end(), Complex{});
  for (std::size_t f = 0; f < coarse.size(); ++f)
    if (coarse_to_padded_[f] != kNone) scratch[coarse_to_padded_[f]] = coarse[f];
  fft_->to_physical(scratch, physical);
}

void Padding::to_spectral(std::span<const Complex> physical, std::span<Complex> scratch,
                          std::span<Complex> coarse) const {
  fft_->to_spectral(physical, scratch);
  for (std::size_t f = 0; f < coarse.size(); ++f)
    coarse[f] = coarse_to_padded_[f] != kNone ? scratch[coarse_to_padded_[f]] : Complex{};
}

// ---------------------------------------------------------------------------
// construction

void clear_nyquist(SpectralVelocity& u) {
  const auto& g = u.grid();
  for (std::size_t f = 0; f < g.points(); ++f)
    if (g.is_nyquist(f))
      for (int c = 0; c < u.dim(); ++c) u.at(c, f) = 0.0;
}

std::vector<ScalarField> to_collocation(const SpectralVelocity& u) {
  const auto fft = FourierTransform::shared(u.dim(), u.grid().modes());
  std::vector<Complex> phys(u.points());
  std::vector<ScalarField> out(u.dim(), ScalarField(u.points()));
  for (int c = 0; c < u.dim(); ++c) {
    fft->to_physical(u.component(c), phys);
    for (std::size_t i = 0; i < phys.size(); ++i) out[c][i] = phys[i].real();
  }
  return out;
}

SpectralVelocity from_collocation(const TorusGrid& grid, const std::vector<ScalarField>& comps) {
  if (static_cast<int>(comps.size()) != grid.dim()) throw std::invalid_argument("component count");
  const auto fft = FourierTransform::shared(grid.dim(), grid.modes());
  SpectralVelocity u(grid);
  std::vector<Complex> phys(grid.points());
  for (int c = 0; c < grid.dim(); ++c) {
    if (comps[c].size() != grid.points()) throw std::invalid_argument("collocation size");
    std::copy(comps[c].begin(), comps[c].end(), phys.begin());
    fft->to_spectral(phys, u.component(c));
  }
  clear_nyquist(u);
  return u;
}

ScalarField scalar_to_collocation(const TorusGrid& grid, const SpectralScalar& s) {
  const auto fft = FourierTransform::shared(grid.dim(), grid.modes());
  std::vector<Complex> phys(grid.points());
  fft->to_physical(s, phys);
  ScalarField out(grid.points());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = phys[i].real();
  return out;
}

SpectralScalar scalar_from_collocation(const TorusGrid& grid, const ScalarField& f) {
  const auto fft = FourierTransform::shared(grid.dim(), grid.modes());
  std::vector<Complex> phys(f.begin(), f.end());
  SpectralScalar s(grid.points());
  fft->to_spectral(phys, s);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (grid.is_nyquist(i)) s[i] = 0.0;
  return s;
}

SpectralVelocity sample_velocity(const TorusGrid& grid, const PointFunction& f) {
  std::vector<ScalarField> comps(grid.dim(), ScalarField(grid.points()));
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const auto v = f(grid.point(i));
    for (int c = 0; c < grid.dim(); ++c) comps[c][i] = v[c];
  }
  return from_collocation(grid, comps);
}

SpectralVelocity taylor_green(const TorusGrid& grid, double amplitude) {
  const double k = grid.wavenumber_unit();
  const int dim = grid.dim();
  return sample_velocity(grid, [=](const std::array<double, 3>& x) {
    const double cz = dim == 3 ? std::cos(k * x[2]) : 1.0;
    return std::array<double, 3>{amplitude * std::sin(k * x[0]) * std::cos(k * x[1]) * cz,
                                 -amplitude * std::cos(k * x[0]) * std::sin(k * x[1]) * cz, 0.0};
  });
}

SpectralVelocity abc_flow(const TorusGrid& grid, double a, double b, double c) {
  if (grid.dim() != 3) throw std::invalid_argument("ABC flow needs a 3-D grid");
  const double k = grid.wavenumber_unit();
  return sample_velocity(grid, [=](const std::array<double, 3>& x) {
    const double sx = std::sin(k * x[0]), cx = std::cos(k * x[0]);
    const double sy = std::sin(k * x[1]), cy = std::cos(k * x[1]);
    const double sz = std::sin(k * x[2]), cz = std::cos(k * x[2]);
    return std::array<double, 3>{a * sz + c * cy, b * sx + a * cz, c * sy + b * cx};
  });
}

SpectralVelocity random_velocity(const TorusGrid& grid, int max_shell, double amplitude,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ScalarField> comps(grid.dim(), ScalarField(grid.points()));
  for (auto& comp : comps)
    for (auto& x : comp) x = normal(rng);
  SpectralVelocity u = from_collocation(grid, comps);
  truncate_inplace(u, std::max(1, std::min(max_shell, grid.max_shell())));
  for (int c = 0; c < u.dim(); ++c) u.at(c, 0) = 0.0;
  leray_project_inplace(u);
  const double norm = std::sqrt(l2_norm_sq(u));
  if (norm > 0.0) u *= amplitude / norm;
  return u;
}

// ---------------------------------------------------------------------------
// projections

void leray_project_inplace(SpectralVelocity& u) {
  const auto& g = u.grid();
  const int d = u.dim();
  for (std::size_t f = 1; f < g.points(); ++f) {
    const auto k = g.lattice(f);
    double k2 = 0.0;
    Complex kdotu = 0.0;
    for (int c = 0; c < d; ++c) {
      k2 += static_cast<double>(k[c]) * k[c];
      kdotu += static_cast<double>(k[c]) * u.at(c, f);
    }
    const Complex s = kdotu / k2;
    for (int c = 0; c < d; ++c) u.at(c, f) -= s * static_cast<double>(k[c]);
  }
}

SpectralVelocity leray_project(SpectralVelocity u) {
  leray_project_inplace(u);
  return u;
}

void truncate_inplace(SpectralVelocity& u, int n) {
  if (n <= 0) throw std::invalid_argument("Galerkin shell index must be positive");
  const auto& g = u.grid();
  for (std::size_t f = 0; f < g.points(); ++f)
    if (g.shell(f) > n || g.is_nyquist(f))
      for (int c = 0; c < u.dim(); ++c) u.at(c, f) = 0.0;
}

SpectralVelocity truncate(SpectralVelocity u, int n) {
  truncate_inplace(u, n);
  return u;
}

// ---------------------------------------------------------------------------
// differential operators

StressField gradient(const SpectralVelocity& u) {
  const auto& g = u.grid();
  const int d = u.dim();
  const auto fft = FourierTransform::shared(d, g.modes());
  StressField out(d, g.points());
  std::vector<Complex> spec(g.points()), phys(g.points());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      for (std::size_t f = 0; f < g.points(); ++f)
        spec[f] = Complex(0.0, g.wavevector(f)[j]) * u.at(i, f);
      fft->to_physical(spec, phys);
      auto dst = out.component(i, j);
      for (std::size_t f = 0; f < g.points(); ++f) dst[f] = phys[f].real();
    }
  return out;
}

StressField sym_gradient(const SpectralVelocity& u) {
  const StressField grad = gradient(u);
  const int d = u.dim();
  StressField out(d, grad.points());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      auto dst = out.component(i, j);
      auto a = grad.component(i, j);
      auto b = grad.component(j, i);
      for (std::size_t f = 0; f < dst.size(); ++f) dst[f] = 0.5 * (a[f] + b[f]);
    }
  return out;
}

SpectralScalar dealiased_product(const TorusGrid& grid, std::span<const Complex> a,
                                 std::span<const Complex> b) {
  const Padding pad(grid);
  const std::size_t n = pad.padded_points();
  std::vector<Complex> scratch(n), pa(n), pb(n);
  pad.to_physical(a, scratch, pa);
  pad.to_physical(b, scratch, pb);
  for (std::size_t i = 0; i < n; ++i) pa[i] = pa[i].real() * pb[i].real();
  SpectralScalar out(grid.points());
  pad.to_spectral(pa, scratch, out);
  return out;
}

SpectralScalar dealiased_product(const TorusGrid& grid, const ScalarField& a, const ScalarField& b) {
  return dealiased_product(grid, scalar_from_collocation(grid, a), scalar_from_collocation(grid, b));
}

std::vector<ScalarField> padded_values(const SpectralVelocity& u) {
  const Padding pad(u.grid());
  const std::size_t n = pad.padded_points();
  std::vector<Complex> scratch(n), phys(n);
  std::vector<ScalarField> out(u.dim(), ScalarField(n));
  for (int c = 0; c < u.dim(); ++c) {
    pad.to_physical(u.component(c), scratch, phys);
    for (std::size_t i = 0; i < n; ++i) out[c][i] = phys[i].real();
  }
  return out;
}

std::vector<ScalarField> padded_gradient(const SpectralVelocity& u) {
  const auto& g = u.grid();
  const int d = u.dim();
  const Padding pad(g);
  const std::size_t n = pad.padded_points();
  std::vector<Complex> scratch(n), phys(n), spec(g.points());
  std::vector<ScalarField> out(d * d, ScalarField(n));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      for (std::size_t f = 0; f < g.points(); ++f) spec[f] = Complex(0.0, g.wavevector(f)[j]) * u.at(i, f);
      pad.to_physical(spec, scratch, phys);
      for (std::size_t x = 0; x < n; ++x) out[i * d + j][x] = phys[x].real();
    }
  return out;
}

ScalarField padded_scalar(const TorusGrid& grid, std::span<const Complex> s) {
  const Padding pad(grid);
  const std::size_t n = pad.padded_points();
  std::vector<Complex> scratch(n), phys(n);
  pad.to_physical(s, scratch, phys);
  ScalarField out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = phys[i].real();
  return out;
}

// ---------------------------------------------------------------------------
// norms

double inner(const SpectralVelocity& u, const SpectralVelocity& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.coeffs().size(); ++i)
    s += (u.coeffs()[i] * std::conj(w.coeffs()[i])).real();
  return s * u.grid().volume();
}

double l2_norm_sq(const SpectralVelocity& u) { return inner(u, u); }

double grad_norm_sq(const SpectralVelocity& u) {
  const auto& g = u.grid();
  double s = 0.0;
  for (int c = 0; c < u.dim(); ++c)
    for (std::size_t f = 0; f < g.points(); ++f) s += g.wavenumber_sq(f) * std::norm(u.at(c, f));
  return s * g.volume();
}

double max_divergence(const SpectralVelocity& u) {
  const auto& g = u.grid();
  double worst = 0.0;
  for (std::size_t f = 0; f < g.points(); ++f) {
    const auto k = g.wavevector(f);
    Complex div = 0.0;
    for (int c = 0; c < u.dim(); ++c) div += k[c] * u.at(c, f);
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

double reality_defect(const SpectralVelocity& u) {
  const auto& g = u.grid();
  double worst = 0.0;
  for (std::size_t f = 0; f < g.points(); ++f) {
    if (g.is_nyquist(f)) continue;
    auto k = g.lattice(f);
    for (int a = 0; a < g.dim(); ++a) k[a] = -k[a];
    const std::size_t m = g.flat_index(k);
    for (int c = 0; c < u.dim(); ++c)
      worst = std::max(worst, std::abs(u.at(c, m) - std::conj(u.at(c, f))));
  }
  return worst;
}

double max_coeff_diff(const SpectralVelocity& a, const SpectralVelocity& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    worst = std::max(worst, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return worst;
}

double power_integral(double volume, std::span<const double> magnitudes, double q) {
  if (magnitudes.empty()) return 0.0;
  double s = 0.0;
  if (q == 2.0) {
    for (double m : magnitudes) s += m * m;
  } else {
    for (double m : magnitudes) s += m == 0.0 ? 0.0 : std::pow(std::abs(m), q);
  }
  return s * volume / static_cast<double>(magnitudes.size());
}

}  // namespace nsv
