// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_OPTIM_HPP_
#define DCAE_OPTIM_HPP_

#include <span>
#include <vector>

#include "dcae/tensor.hpp"

namespace dcae {

// Squared-gradient running averages, one accumulator per parameter in the
// same order as the parameter list it was created for.
struct RmsPropState {
  float rho = 0.9f;
  float epsilon = 1e-8f;
  std::vector<Tensor<float>> accumulators;

  static RmsPropState for_parameters(std::span<const Tensor<float>> params, float rho = 0.9f,
                                     float epsilon = 1e-8f);
};

/// acc <- rho*acc + (1-rho)*grad^2 ; param <- param - lr*grad/(sqrt(acc)+eps)
template <typename T>
void rmsprop_update(std::span<T> param, std::span<const T> grad, std::span<T> acc, T lr, T rho,
                    T epsilon);

// Applies one update to every parameter. A parameter without an accumulated
// gradient is treated as having a zero gradient.
void rmsprop_step(std::span<Tensor<float>> params, RmsPropState& state, float lr);

}  // namespace dcae

#endif  // DCAE_OPTIM_HPP_
