// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_OPS_HPP_
#define DCAE_OPS_HPP_

#include <cstddef>

#include "dcae/tensor.hpp"

namespace dcae {

// Differentiable primitives. Every op records a backward closure when grad
// mode is on and at least one input requires grad. Layout is batch x
// channels x length for all sequence tensors.

std::size_t conv1d_output_length(std::size_t length, std::size_t kernel, std::size_t stride,
                                 std::size_t pad);
std::size_t conv1d_transposed_output_length(std::size_t length, std::size_t kernel,
                                            std::size_t stride, std::size_t pad,
                                            std::size_t output_pad);

/// Bias-free strided cross-correlation with zero padding.
/// input [N x Cin x L], weight [Cout x Cin x K] -> [N x Cout x Lout].
template <typename T>
Tensor<T> conv1d(const Tensor<T>& input, const Tensor<T>& weight, std::size_t stride,
                 std::size_t pad);

/// Adjoint of conv1d. input [N x Cin x L], weight [Cin x Cout x K].
template <typename T>
Tensor<T> conv1d_transposed(const Tensor<T>& input, const Tensor<T>& weight,
                            std::size_t stride, std::size_t pad, std::size_t output_pad);

/// Per-channel leaky slope; channels are axis 1 of a rank-2 or rank-3 input.
template <typename T>
Tensor<T> prelu(const Tensor<T>& x, const Tensor<T>& alpha);

template <typename T>
Tensor<T> tanh_act(const Tensor<T>& x);

/// Batch-statistics normalisation over the N and L axes of [N x C x L].
template <typename T>
Tensor<T> batchnorm1d(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                      T eps = T(1e-5));

/// x [N x Fin], weight [Fout x Fin], bias [Fout].
template <typename T>
Tensor<T> dense(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias);

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);

/// Channels [begin, end) of an [N x C x L] tensor.
template <typename T>
Tensor<T> slice_channels(const Tensor<T>& x, std::size_t begin, std::size_t end);

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape shape);

/// Mean absolute difference over all elements.
template <typename T>
Tensor<T> l1_loss(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> sum(const Tensor<T>& x);
template <typename T>
Tensor<T> mean(const Tensor<T>& x);
template <typename T>
Tensor<T> square(const Tensor<T>& x);
template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> scale(const Tensor<T>& x, T factor);
template <typename T>
Tensor<T> add_scalar(const Tensor<T>& x, T offset);

}  // namespace dcae

#endif  // DCAE_OPS_HPP_
