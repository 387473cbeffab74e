#pragma once

#include <random>

#include "nsv/tensor.hpp"

namespace nsvtest {

/// Random symmetric d x d tensor with entries uniform in [-scale, scale].
inline nsv::SymTensor random_sym(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  nsv::SymTensor t(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) t(i, j) = t(j, i) = u(rng);
  return t;
}

}  // namespace nsvtest
