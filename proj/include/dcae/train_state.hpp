// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_TRAIN_STATE_HPP_
#define DCAE_TRAIN_STATE_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

#include "dcae/model.hpp"
#include "dcae/optim.hpp"

namespace dcae {

// Everything besides the weights needed to continue training exactly where
// it stopped.
struct TrainState {
  std::size_t epoch = 0;  // next epoch to run
  std::size_t step = 0;
  double lambda = 100.0;
  RmsPropState generator_opt;
  RmsPropState discriminator_opt;
  std::mt19937_64 rng;

  static TrainState initial(const ModelConfig& config, const ModelParams& params,
                            std::uint64_t seed);
};

}  // namespace dcae

#endif  // DCAE_TRAIN_STATE_HPP_
