// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/optim.hpp"

#include <cmath>
#include <string>

namespace dcae {

RmsPropState RmsPropState::for_parameters(std::span<const Tensor<float>> params, float rho,
                                          float epsilon) {
  RmsPropState state;
  state.rho = rho;
  state.epsilon = epsilon;
  state.accumulators.reserve(params.size());
  for (const auto& p : params) state.accumulators.emplace_back(p.shape(), 0.0f);
  return state;
}

template <typename T>
void rmsprop_update(std::span<T> param, std::span<const T> grad, std::span<T> acc, T lr, T rho,
                    T epsilon) {
  if (param.size() != grad.size() || param.size() != acc.size()) {
    throw ShapeError("rmsprop_update: parameter, gradient and accumulator sizes differ (" +
                     std::to_string(param.size()) + ", " + std::to_string(grad.size()) + ", " +
                     std::to_string(acc.size()) + ")");
  }
  for (std::size_t i = 0; i < param.size(); ++i) {
    const T g = grad[i];
    acc[i] = rho * acc[i] + (T(1) - rho) * g * g;
    param[i] -= lr * g / (std::sqrt(acc[i]) + epsilon);
  }
}

void rmsprop_step(std::span<Tensor<float>> params, RmsPropState& state, float lr) {
  if (params.size() != state.accumulators.size()) {
    throw ShapeError("rmsprop_step: " + std::to_string(params.size()) + " parameters but " +
                     std::to_string(state.accumulators.size()) + " accumulators");
  }
  std::vector<float> zeros;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    auto& acc = state.accumulators[i];
    if (p.shape() != acc.shape()) {
      throw ShapeError("rmsprop_step: parameter " + std::to_string(i) + " has shape " +
                       to_string(p.shape()) + ", accumulator " + to_string(acc.shape()));
    }
    std::span<const float> grad = p.grad();
    if (!p.has_grad()) {
      zeros.assign(p.numel(), 0.0f);
      grad = zeros;
    }
    rmsprop_update<float>(p.data(), grad, acc.data(), lr, state.rho, state.epsilon);
  }
}

template void rmsprop_update<float>(std::span<float>, std::span<const float>, std::span<float>,
                                    float, float, float);
template void rmsprop_update<double>(std::span<double>, std::span<const double>,
                                     std::span<double>, double, double, double);

}  // namespace dcae
