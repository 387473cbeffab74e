#include "nsv/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace nsv {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

namespace {

fftw_complex* as_fftw(const Complex* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}

}  // namespace

FourierTransform::FourierTransform(int dim, int n) : dim_(dim), n_(n) {
  if (dim < 1 || dim > 3 || n < 1) throw std::invalid_argument("bad transform shape");
  points_ = 1;
  for (int a = 0; a < dim; ++a) points_ *= static_cast<std::size_t>(n);
  std::vector<Complex> in(points_), out(points_);
  const int shape[3] = {n, n, n};
  std::lock_guard lock(fftw_planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_ = fftw_plan_dft(dim, shape, as_fftw(in.data()), as_fftw(out.data()), FFTW_FORWARD, flags);
  backward_ = fftw_plan_dft(dim, shape, as_fftw(in.data()), as_fftw(out.data()), FFTW_BACKWARD, flags);
  if (!forward_ || !backward_) throw std::runtime_error("FFTW planning failed");
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(fftw_planner_mutex());
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

std::shared_ptr<const FourierTransform> FourierTransform::shared(int dim, int n) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const FourierTransform>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{dim, n}];
  if (!slot) slot = std::make_shared<const FourierTransform>(dim, n);
  return slot;
}

void FourierTransform::to_physical(std::span<const Complex> spectral,
                                   std::span<Complex> physical) const {
  if (spectral.size() != points_ || physical.size() != points_)
    throw std::invalid_argument("transform size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(backward_), as_fftw(spectral.data()),
                   as_fftw(physical.data()));
}

void FourierTransform::to_spectral(std::span<const Complex> physical,
                                   std::span<Complex> spectral) const {
  if (spectral.size() != points_ || physical.size() != points_)
    throw std::invalid_argument("transform size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_), as_fftw(physical.data()),
                   as_fftw(spectral.data()));
  const double scale = 1.0 / static_cast<double>(points_);
  for (auto& c : spectral) c *= scale;
}

}  // namespace nsv
