// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Reference implementations and numerical checks shared by the test suites.
// Nothing here calls into the library's kernels.

#ifndef DCAE_TESTS_ORACLES_HPP_
#define DCAE_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dcae/ops.hpp"
#include "dcae/tensor.hpp"

namespace dcae::oracle {

// Direct loop: y[n,o,t] = sum_{c,k} w[o,c,k] * x[n,c,t*s+k-p].
inline std::vector<double> naive_conv1d(const std::vector<double>& x, std::size_t n,
                                        std::size_t cin, std::size_t len,
                                        const std::vector<double>& w, std::size_t cout,
                                        std::size_t k, std::size_t stride, std::size_t pad) {
  const std::size_t lout = (len + 2 * pad - k) / stride + 1;
  std::vector<double> y(n * cout * lout, 0.0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t o = 0; o < cout; ++o)
      for (std::size_t t = 0; t < lout; ++t) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cin; ++c)
          for (std::size_t j = 0; j < k; ++j) {
            const long pos = long(t * stride + j) - long(pad);
            if (pos < 0 || pos >= long(len)) continue;
            acc += w[(o * cin + c) * k + j] * x[(b * cin + c) * len + std::size_t(pos)];
          }
        y[(b * cout + o) * lout + t] = acc;
      }
  return y;
}

// Scatter form of the transposed convolution with weight [Cin x Cout x K].
inline std::vector<double> naive_conv1d_transposed(const std::vector<double>& x, std::size_t n,
                                                   std::size_t cin, std::size_t len,
                                                   const std::vector<double>& w,
                                                   std::size_t cout, std::size_t k,
                                                   std::size_t stride, std::size_t pad,
                                                   std::size_t output_pad) {
  const std::size_t lout = (len - 1) * stride + k + output_pad - 2 * pad;
  std::vector<double> y(n * cout * lout, 0.0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < cin; ++c)
      for (std::size_t i = 0; i < len; ++i)
        for (std::size_t o = 0; o < cout; ++o)
          for (std::size_t j = 0; j < k; ++j) {
            const long pos = long(i * stride + j) - long(pad);
            if (pos < 0 || pos >= long(lout)) continue;
            y[(b * cout + o) * lout + std::size_t(pos)] +=
                w[(c * cout + o) * k + j] * x[(b * cin + c) * len + i];
          }
  return y;
}

template <typename T>
Tensor<T> random_tensor(Shape shape, std::mt19937_64& rng, double stddev = 1.0) {
  Tensor<T> t(std::move(shape));
  std::normal_distribution<double> dist(0.0, stddev);
  for (auto& v : t.data()) v = static_cast<T>(dist(rng));
  return t;
}

inline std::vector<double> to_double(std::span<const float> v) { return {v.begin(), v.end()}; }

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_relative_diff(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  }
  return scale > 0.0 ? diff / scale : diff;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Smooth scalar probe with O(1) gradients: sum((y + r)^2) for a fixed random r.
inline Tensor<double> probe(const Tensor<double>& y, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto r = random_tensor<double>(y.shape(), rng);
  return sum(square(add(y, r)));
}

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t points = 0;
};

// Central finite differences at `points` random coordinates of every input.
// Relative error uses max(|analytic|, |numeric|, floor) as the denominator.
inline GradCheckResult check_gradients(std::vector<Tensor<double>> inputs,
                                       const std::function<Tensor<double>()>& loss_fn,
                                       std::size_t points, std::uint64_t seed,
                                       double h = 1e-5, double floor = 1e-6) {
  for (auto& t : inputs) {
    t.set_requires_grad(true);
    t.zero_grad();
  }
  backward(loss_fn());
  std::mt19937_64 rng(seed);
  GradCheckResult result;
  NoGradGuard no_grad;
  for (auto& t : inputs) {
    std::uniform_int_distribution<std::size_t> pick(0, t.numel() - 1);
    for (std::size_t p = 0; p < points; ++p) {
      const std::size_t i = pick(rng);
      const double analytic = t.has_grad() ? t.grad()[i] : 0.0;
      const double saved = t.data()[i];
      t.data()[i] = saved + h;
      const double up = loss_fn().item();
      t.data()[i] = saved - h;
      const double down = loss_fn().item();
      t.data()[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
      result.max_relative_error =
          std::max(result.max_relative_error, std::abs(analytic - numeric) / denom);
      ++result.points;
    }
  }
  return result;
}

}  // namespace dcae::oracle

#endif  // DCAE_TESTS_ORACLES_HPP_
