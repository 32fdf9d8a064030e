// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Randomised check batteries used by both the unit tests and the acceptance
// runner.

#ifndef DCAE_TESTS_SUITES_HPP_
#define DCAE_TESTS_SUITES_HPP_

#include <string>
#include <utility>
#include <vector>

#include "dcae/train.hpp"
#include "oracles.hpp"

namespace dcae::suite {

using oracle::GradCheckResult;
using oracle::random_tensor;

struct OpGradient {
  std::string op;
  GradCheckResult result;
};

inline std::vector<OpGradient> gradient_suite(std::size_t points = 10, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::vector<OpGradient> out;
  auto run = [&](std::string name, std::vector<Tensor<double>> inputs,
                 std::function<Tensor<double>()> fn) {
    out.push_back({std::move(name), oracle::check_gradients(inputs, fn, points, rng())});
  };

  {
    auto x = random_tensor<double>({2, 3, 17}, rng);
    auto w = random_tensor<double>({4, 3, 5}, rng);
    run("conv1d", {x, w}, [=] { return oracle::probe(conv1d(x, w, 2, 2), 1); });
  }
  {
    auto x = random_tensor<double>({2, 3, 6}, rng);
    auto w = random_tensor<double>({3, 2, 7}, rng);
    run("conv1d_transposed", {x, w},
        [=] { return oracle::probe(conv1d_transposed(x, w, 4, 3, 3), 2); });
  }
  {
    auto x = random_tensor<double>({2, 3, 9}, rng);
    auto a = random_tensor<double>({3}, rng, 0.3);
    run("prelu", {x, a}, [=] { return oracle::probe(prelu(x, a), 3); });
  }
  {
    auto x = random_tensor<double>({2, 2, 8}, rng);
    run("tanh", {x}, [=] { return oracle::probe(tanh_act(x), 4); });
  }
  {
    auto x = random_tensor<double>({3, 2, 5}, rng);
    auto g = random_tensor<double>({2}, rng);
    auto b = random_tensor<double>({2}, rng);
    run("batchnorm1d", {x, g, b}, [=] { return oracle::probe(batchnorm1d(x, g, b), 5); });
  }
  {
    auto x = random_tensor<double>({3, 6}, rng);
    auto w = random_tensor<double>({4, 6}, rng);
    auto b = random_tensor<double>({4}, rng);
    run("dense", {x, w, b}, [=] { return oracle::probe(dense(x, w, b), 6); });
  }
  {
    auto a = random_tensor<double>({2, 2, 5}, rng);
    auto b = random_tensor<double>({2, 3, 5}, rng);
    run("concat_channels", {a, b}, [=] { return oracle::probe(concat_channels(a, b), 7); });
  }
  {
    auto a = random_tensor<double>({2, 1, 12}, rng);
    auto b = random_tensor<double>({2, 1, 12}, rng);
    run("l1_loss", {a, b}, [=] { return l1_loss(a, b); });
  }
  {
    auto real = random_tensor<double>({6}, rng);
    auto fake = random_tensor<double>({6}, rng);
    run("d_loss", {real, fake}, [=] { return d_loss(real, fake); });
  }
  {
    auto scores = random_tensor<double>({4}, rng);
    auto xs = random_tensor<double>({4, 1, 10}, rng);
    auto x = random_tensor<double>({4, 1, 10}, rng);
    run("g_loss", {scores, xs, x}, [=] { return g_loss(scores, xs, x, 100.0); });
  }
  {
    auto x = random_tensor<double>({2, 5, 4}, rng);
    run("slice_channels", {x}, [=] { return oracle::probe(slice_channels(x, 1, 4), 8); });
  }
  {
    auto x = random_tensor<double>({2, 3, 4}, rng);
    run("reshape", {x}, [=] { return oracle::probe(reshape(x, Shape{2, 12}), 9); });
  }
  {
    auto x = random_tensor<double>({3, 4}, rng);
    run("mean/scale/add_scalar", {x},
        [=] { return mean(square(add_scalar(scale(x, 1.5), -0.25))); });
  }
  return out;
}

// Worst relative deviation of float conv1d from the double-precision direct
// loop over `cases` random configurations.
inline double conv_oracle_worst(std::size_t cases = 100, std::uint64_t seed = 11) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t strides[] = {1, 2, 4};
  double worst = 0.0;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = uniform(1, 3), cin = uniform(1, 6), cout = uniform(1, 6);
    const std::size_t k = 2 * uniform(0, 7) + 1, stride = strides[uniform(0, 2)];
    const std::size_t pad = uniform(0, k);
    const std::size_t len = uniform(k > 2 * pad ? k - 2 * pad : 1, 80);
    auto x = random_tensor<float>({n, cin, len}, rng);
    auto w = random_tensor<float>({cout, cin, k}, rng);
    const auto got = oracle::to_double(conv1d(x, w, stride, pad).data());
    const auto want = oracle::naive_conv1d(oracle::to_double(x.data()), n, cin, len,
                                           oracle::to_double(w.data()), cout, k, stride, pad);
    if (got.size() != want.size()) return 1.0;
    worst = std::max(worst, oracle::max_relative_diff(got, want));
  }
  return worst;
}

// Worst relative gap between <conv(x), y> and <x, convT(y)> in double.
inline double adjoint_worst(std::size_t cases = 50, std::uint64_t seed = 13) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t strides[] = {1, 2, 4};
  double worst = 0.0;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = uniform(1, 3), cin = uniform(1, 5), cout = uniform(1, 5);
    const std::size_t k = 2 * uniform(0, 7) + 1, stride = strides[uniform(0, 2)];
    const std::size_t pad = uniform(0, (k - 1) / 2);
    const std::size_t len = uniform(k, 70);
    const std::size_t lout = conv1d_output_length(len, k, stride, pad);
    const std::size_t output_pad = len + 2 * pad - k - (lout - 1) * stride;
    auto x = random_tensor<double>({n, cin, len}, rng);
    auto w = random_tensor<double>({cout, cin, k}, rng);
    auto y = random_tensor<double>({n, cout, lout}, rng);
    const double lhs = oracle::dot(conv1d(x, w, stride, pad).data(), y.data());
    const double rhs =
        oracle::dot(x.data(), conv1d_transposed(y, w, stride, pad, output_pad).data());
    worst = std::max(worst, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-30}));
  }
  return worst;
}

}  // namespace dcae::suite

#endif  // DCAE_TESTS_SUITES_HPP_
