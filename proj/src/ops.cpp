// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace dcae {

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;

template <typename T>
void check_finite([[maybe_unused]] const Tensor<T>& t, [[maybe_unused]] const char* op) {
#ifndef NDEBUG
  for (T v : t.data()) {
    assert(std::isfinite(v) && op);
  }
#endif
}

// Wraps a freshly computed value into a graph node. The closure is only kept
// when at least one input participates in differentiation.
template <typename T>
Tensor<T> make_output(Shape shape, std::vector<T> values,
                      std::initializer_list<const Tensor<T>*> inputs,
                      std::function<void(Node<T>&)> backward_fn, const char* op) {
  Tensor<T> out(std::move(shape), std::move(values));
  check_finite(out, op);
  if (!grad_enabled()) return out;
  bool track = false;
  for (const auto* in : inputs) track = track || in->requires_grad();
  if (!track) return out;
  auto& node = *out.node();
  node.requires_grad = true;
  for (const auto* in : inputs) node.inputs.push_back(in->node());
  node.backward_fn = std::move(backward_fn);
  return out;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw ShapeError(what);
}

template <typename T>
void require_rank(const Tensor<T>& t, std::size_t rank, const char* op, const char* arg) {
  require(t.defined(), std::string(op) + ": " + arg + " is undefined");
  require(t.rank() == rank, std::string(op) + ": " + arg + " must be rank " +
                                std::to_string(rank) + ", got " + to_string(t.shape()));
}

// Valid output positions t such that 0 <= t*stride + offset < length.
std::pair<std::int64_t, std::int64_t> valid_range(std::int64_t offset, std::int64_t length,
                                                  std::int64_t stride, std::int64_t cols) {
  std::int64_t lo = offset >= 0 ? 0 : (-offset + stride - 1) / stride;
  std::int64_t hi = length - offset <= 0 ? 0 : (length - offset + stride - 1) / stride;
  return {std::min(lo, cols), std::clamp(hi, std::int64_t{0}, cols)};
}

// col[(c*K + k) * cols + t] = src[c, t*stride + k - pad], zero outside.
template <typename T>
void im2col(const T* src, std::size_t channels, std::size_t src_len, std::size_t kernel,
            std::size_t stride, std::size_t pad, std::size_t cols, T* col) {
  const auto s = static_cast<std::int64_t>(stride);
  for (std::size_t c = 0; c < channels; ++c) {
    const T* in = src + c * src_len;
    for (std::size_t k = 0; k < kernel; ++k) {
      T* row = col + (c * kernel + k) * cols;
      const std::int64_t offset = static_cast<std::int64_t>(k) - static_cast<std::int64_t>(pad);
      auto [lo, hi] = valid_range(offset, static_cast<std::int64_t>(src_len), s,
                                  static_cast<std::int64_t>(cols));
      if (hi < lo) hi = lo;
      std::fill(row, row + lo, T(0));
      for (std::int64_t t = lo; t < hi; ++t) row[t] = in[t * s + offset];
      std::fill(row + hi, row + cols, T(0));
    }
  }
}

// Adjoint of im2col: scatter-add columns back into dst.
template <typename T>
void col2im(const T* col, std::size_t channels, std::size_t dst_len, std::size_t kernel,
            std::size_t stride, std::size_t pad, std::size_t cols, T* dst) {
  const auto s = static_cast<std::int64_t>(stride);
  for (std::size_t c = 0; c < channels; ++c) {
    T* out = dst + c * dst_len;
    for (std::size_t k = 0; k < kernel; ++k) {
      const T* row = col + (c * kernel + k) * cols;
      const std::int64_t offset = static_cast<std::int64_t>(k) - static_cast<std::int64_t>(pad);
      auto [lo, hi] = valid_range(offset, static_cast<std::int64_t>(dst_len), s,
                                  static_cast<std::int64_t>(cols));
      for (std::int64_t t = lo; t < hi; ++t) out[t * s + offset] += row[t];
    }
  }
}

}  // namespace

std::size_t conv1d_output_length(std::size_t length, std::size_t kernel, std::size_t stride,
                                 std::size_t pad) {
  require(stride > 0, "conv1d: stride must be positive");
  require(length + 2 * pad >= kernel, "conv1d: padded length " +
                                          std::to_string(length + 2 * pad) +
                                          " shorter than kernel " + std::to_string(kernel));
  return (length + 2 * pad - kernel) / stride + 1;
}

std::size_t conv1d_transposed_output_length(std::size_t length, std::size_t kernel,
                                            std::size_t stride, std::size_t pad,
                                            std::size_t output_pad) {
  require(stride > 0, "conv1d_transposed: stride must be positive");
  require(output_pad < stride, "conv1d_transposed: output_pad must be < stride");
  const std::size_t full = (length - 1) * stride + kernel + output_pad;
  require(full > 2 * pad, "conv1d_transposed: padding consumes the whole output");
  return full - 2 * pad;
}

template <typename T>
Tensor<T> conv1d(const Tensor<T>& input, const Tensor<T>& weight, std::size_t stride,
                 std::size_t pad) {
  require_rank(input, 3, "conv1d", "input");
  require_rank(weight, 3, "conv1d", "weight");
  const std::size_t n = input.dim(0), cin = input.dim(1), len = input.dim(2);
  const std::size_t cout = weight.dim(0), k = weight.dim(2);
  require(weight.dim(1) == cin, "conv1d: input " + to_string(input.shape()) +
                                    " has " + std::to_string(cin) +
                                    " channels but weight " + to_string(weight.shape()) +
                                    " expects " + std::to_string(weight.dim(1)));
  require(k % 2 == 1, "conv1d: kernel size must be odd, got " + std::to_string(k));
  const std::size_t lout = conv1d_output_length(len, k, stride, pad);

  std::vector<T> out(n * cout * lout);
  std::vector<T> col(cin * k * lout);
  ConstMatMap<T> w(weight.data().data(), cout, cin * k);
  const T* x = input.data().data();
  for (std::size_t b = 0; b < n; ++b) {
    im2col(x + b * cin * len, cin, len, k, stride, pad, lout, col.data());
    MatMap<T>(out.data() + b * cout * lout, cout, lout).noalias() =
        w * ConstMatMap<T>(col.data(), cin * k, lout);
  }

  auto backward_fn = [=](Node<T>& self) {
    const auto& xin = *self.inputs[0];
    const auto& win = *self.inputs[1];
    std::vector<T> cbuf(cin * k * lout);
    ConstMatMap<T> wm(win.data.data(), cout, cin * k);
    for (std::size_t b = 0; b < n; ++b) {
      ConstMatMap<T> dout(self.grad.data() + b * cout * lout, cout, lout);
      if (win.requires_grad) {
        im2col(xin.data.data() + b * cin * len, cin, len, k, stride, pad, lout, cbuf.data());
        MatMap<T>(self.inputs[1]->ensure_grad().data(), cout, cin * k).noalias() +=
            dout * ConstMatMap<T>(cbuf.data(), cin * k, lout).transpose();
      }
      if (xin.requires_grad) {
        MatMap<T>(cbuf.data(), cin * k, lout).noalias() = wm.transpose() * dout;
        col2im(cbuf.data(), cin, len, k, stride, pad, lout,
               self.inputs[0]->ensure_grad().data() + b * cin * len);
      }
    }
  };
  return make_output<T>({n, cout, lout}, std::move(out), {&input, &weight}, backward_fn,
                        "conv1d");
}

template <typename T>
Tensor<T> conv1d_transposed(const Tensor<T>& input, const Tensor<T>& weight,
                            std::size_t stride, std::size_t pad, std::size_t output_pad) {
  require_rank(input, 3, "conv1d_transposed", "input");
  require_rank(weight, 3, "conv1d_transposed", "weight");
  const std::size_t n = input.dim(0), cin = input.dim(1), len = input.dim(2);
  const std::size_t cout = weight.dim(1), k = weight.dim(2);
  require(weight.dim(0) == cin, "conv1d_transposed: input " + to_string(input.shape()) +
                                    " has " + std::to_string(cin) +
                                    " channels but weight " + to_string(weight.shape()) +
                                    " expects " + std::to_string(weight.dim(0)));
  const std::size_t lout = conv1d_transposed_output_length(len, k, stride, pad, output_pad);

  std::vector<T> out(n * cout * lout, T(0));
  std::vector<T> col(cout * k * len);
  ConstMatMap<T> w(weight.data().data(), cin, cout * k);
  const T* x = input.data().data();
  for (std::size_t b = 0; b < n; ++b) {
    MatMap<T>(col.data(), cout * k, len).noalias() =
        w.transpose() * ConstMatMap<T>(x + b * cin * len, cin, len);
    col2im(col.data(), cout, lout, k, stride, pad, len, out.data() + b * cout * lout);
  }

  auto backward_fn = [=](Node<T>& self) {
    const auto& xin = *self.inputs[0];
    const auto& win = *self.inputs[1];
    std::vector<T> cbuf(cout * k * len);
    ConstMatMap<T> wm(win.data.data(), cin, cout * k);
    for (std::size_t b = 0; b < n; ++b) {
      im2col(self.grad.data() + b * cout * lout, cout, lout, k, stride, pad, len, cbuf.data());
      ConstMatMap<T> dcol(cbuf.data(), cout * k, len);
      if (xin.requires_grad) {
        MatMap<T>(self.inputs[0]->ensure_grad().data() + b * cin * len, cin, len).noalias() +=
            wm * dcol;
      }
      if (win.requires_grad) {
        MatMap<T>(self.inputs[1]->ensure_grad().data(), cin, cout * k).noalias() +=
            ConstMatMap<T>(xin.data.data() + b * cin * len, cin, len) * dcol.transpose();
      }
    }
  };
  return make_output<T>({n, cout, lout}, std::move(out), {&input, &weight}, backward_fn,
                        "conv1d_transposed");
}

template <typename T>
Tensor<T> prelu(const Tensor<T>& x, const Tensor<T>& alpha) {
  require(x.defined() && (x.rank() == 2 || x.rank() == 3),
          "prelu: input must be rank 2 or 3");
  require_rank(alpha, 1, "prelu", "alpha");
  const std::size_t n = x.dim(0), c = x.dim(1), inner = x.rank() == 3 ? x.dim(2) : 1;
  require(alpha.dim(0) == c, "prelu: alpha has " + std::to_string(alpha.dim(0)) +
                                 " slopes for " + std::to_string(c) + " channels");
  std::vector<T> out(x.numel());
  const T* xv = x.data().data();
  const T* a = alpha.data().data();
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      const std::size_t base = (b * c + ch) * inner;
      for (std::size_t i = 0; i < inner; ++i) {
        const T v = xv[base + i];
        out[base + i] = v >= T(0) ? v : a[ch] * v;
      }
    }
  }
  auto backward_fn = [=](Node<T>& self) {
    const auto& xin = *self.inputs[0];
    const auto& ain = *self.inputs[1];
    const T* g = self.grad.data();
    T* dx = xin.requires_grad ? self.inputs[0]->ensure_grad().data() : nullptr;
    T* da = ain.requires_grad ? self.inputs[1]->ensure_grad().data() : nullptr;
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t ch = 0; ch < c; ++ch) {
        const std::size_t base = (b * c + ch) * inner;
        T acc = T(0);
        for (std::size_t i = 0; i < inner; ++i) {
          const T v = xin.data[base + i];
          if (dx) dx[base + i] += v >= T(0) ? g[base + i] : ain.data[ch] * g[base + i];
          if (v < T(0)) acc += g[base + i] * v;
        }
        if (da) da[ch] += acc;
      }
    }
  };
  return make_output<T>(x.shape(), std::move(out), {&x, &alpha}, backward_fn, "prelu");
}

template <typename T>
Tensor<T> tanh_act(const Tensor<T>& x) {
  std::vector<T> out(x.numel());
  std::transform(x.data().begin(), x.data().end(), out.begin(),
                 [](T v) { return std::tanh(v); });
  auto backward_fn = [](Node<T>& self) {
    auto& dx = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < dx.size(); ++i) {
      const T y = self.data[i];
      dx[i] += self.grad[i] * (T(1) - y * y);
    }
  };
  return make_output<T>(x.shape(), std::move(out), {&x}, backward_fn, "tanh");
}

template <typename T>
Tensor<T> batchnorm1d(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                      T eps) {
  require_rank(x, 3, "batchnorm1d", "input");
  require_rank(gamma, 1, "batchnorm1d", "gamma");
  require_rank(beta, 1, "batchnorm1d", "beta");
  const std::size_t n = x.dim(0), c = x.dim(1), len = x.dim(2);
  require(gamma.dim(0) == c && beta.dim(0) == c,
          "batchnorm1d: affine parameters must have " + std::to_string(c) + " entries");
  const std::size_t m = n * len;
  require(m > 1, "batchnorm1d: need more than one value per channel (N*L = 1)");

  std::vector<T> xhat(x.numel()), out(x.numel()), inv_std(c);
  const T* xv = x.data().data();
  for (std::size_t ch = 0; ch < c; ++ch) {
    T mu = T(0);
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < len; ++i) mu += xv[(b * c + ch) * len + i];
    mu /= static_cast<T>(m);
    T var = T(0);
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < len; ++i) {
        const T d = xv[(b * c + ch) * len + i] - mu;
        var += d * d;
      }
    var /= static_cast<T>(m);
    inv_std[ch] = T(1) / std::sqrt(var + eps);
    const T g = gamma.data()[ch], be = beta.data()[ch];
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t idx = (b * c + ch) * len + i;
        xhat[idx] = (xv[idx] - mu) * inv_std[ch];
        out[idx] = g * xhat[idx] + be;
      }
  }

  auto backward_fn = [=, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node<T>& self) {
    const T* dy = self.grad.data();
    const auto& gin = *self.inputs[1];
    for (std::size_t ch = 0; ch < c; ++ch) {
      T sum_dy = T(0), sum_dy_xhat = T(0);
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t i = 0; i < len; ++i) {
          const std::size_t idx = (b * c + ch) * len + i;
          sum_dy += dy[idx];
          sum_dy_xhat += dy[idx] * xhat[idx];
        }
      if (gin.requires_grad) self.inputs[1]->ensure_grad()[ch] += sum_dy_xhat;
      if (self.inputs[2]->requires_grad) self.inputs[2]->ensure_grad()[ch] += sum_dy;
      if (self.inputs[0]->requires_grad) {
        auto& dx = self.inputs[0]->ensure_grad();
        const T scale = gin.data[ch] * inv_std[ch] / static_cast<T>(m);
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t i = 0; i < len; ++i) {
            const std::size_t idx = (b * c + ch) * len + i;
            dx[idx] += scale * (static_cast<T>(m) * dy[idx] - sum_dy - xhat[idx] * sum_dy_xhat);
          }
      }
    }
  };
  return make_output<T>(x.shape(), std::move(out), {&x, &gamma, &beta}, backward_fn,
                        "batchnorm1d");
}

template <typename T>
Tensor<T> dense(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias) {
  require_rank(x, 2, "dense", "input");
  require_rank(weight, 2, "dense", "weight");
  require_rank(bias, 1, "dense", "bias");
  const std::size_t n = x.dim(0), fin = x.dim(1), fout = weight.dim(0);
  require(weight.dim(1) == fin, "dense: input " + to_string(x.shape()) +
                                    " does not match weight " + to_string(weight.shape()));
  require(bias.dim(0) == fout, "dense: bias " + to_string(bias.shape()) +
                                   " does not match weight " + to_string(weight.shape()));
  std::vector<T> out(n * fout);
  MatMap<T> y(out.data(), n, fout);
  y.noalias() = ConstMatMap<T>(x.data().data(), n, fin) *
                ConstMatMap<T>(weight.data().data(), fout, fin).transpose();
  y.rowwise() += Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(bias.data().data(), fout);

  auto backward_fn = [=](Node<T>& self) {
    ConstMatMap<T> dy(self.grad.data(), n, fout);
    auto& xin = *self.inputs[0];
    auto& win = *self.inputs[1];
    auto& bin = *self.inputs[2];
    if (xin.requires_grad) {
      MatMap<T>(xin.ensure_grad().data(), n, fin).noalias() +=
          dy * ConstMatMap<T>(win.data.data(), fout, fin);
    }
    if (win.requires_grad) {
      MatMap<T>(win.ensure_grad().data(), fout, fin).noalias() +=
          dy.transpose() * ConstMatMap<T>(xin.data.data(), n, fin);
    }
    if (bin.requires_grad) {
      auto& db = bin.ensure_grad();
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t j = 0; j < fout; ++j) db[j] += dy(b, j);
    }
  };
  return make_output<T>({n, fout}, std::move(out), {&x, &weight, &bias}, backward_fn, "dense");
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  require_rank(a, 3, "concat_channels", "a");
  require_rank(b, 3, "concat_channels", "b");
  require(a.dim(0) == b.dim(0) && a.dim(2) == b.dim(2),
          "concat_channels: batch/length mismatch " + to_string(a.shape()) + " vs " +
              to_string(b.shape()));
  const std::size_t n = a.dim(0), ca = a.dim(1), cb = b.dim(1), len = a.dim(2);
  std::vector<T> out(n * (ca + cb) * len);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(a.data().data() + i * ca * len, ca * len, out.data() + i * (ca + cb) * len);
    std::copy_n(b.data().data() + i * cb * len, cb * len,
                out.data() + (i * (ca + cb) + ca) * len);
  }
  auto backward_fn = [=](Node<T>& self) {
    for (std::size_t i = 0; i < n; ++i) {
      const T* g = self.grad.data() + i * (ca + cb) * len;
      if (self.inputs[0]->requires_grad) {
        T* da = self.inputs[0]->ensure_grad().data() + i * ca * len;
        for (std::size_t j = 0; j < ca * len; ++j) da[j] += g[j];
      }
      if (self.inputs[1]->requires_grad) {
        T* db = self.inputs[1]->ensure_grad().data() + i * cb * len;
        for (std::size_t j = 0; j < cb * len; ++j) db[j] += g[ca * len + j];
      }
    }
  };
  return make_output<T>({n, ca + cb, len}, std::move(out), {&a, &b}, backward_fn,
                        "concat_channels");
}

template <typename T>
Tensor<T> slice_channels(const Tensor<T>& x, std::size_t begin, std::size_t end) {
  require_rank(x, 3, "slice_channels", "input");
  require(begin < end && end <= x.dim(1), "slice_channels: bad channel range [" +
                                              std::to_string(begin) + ", " +
                                              std::to_string(end) + ") for " +
                                              to_string(x.shape()));
  const std::size_t n = x.dim(0), c = x.dim(1), len = x.dim(2), w = end - begin;
  std::vector<T> out(n * w * len);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(x.data().data() + (i * c + begin) * len, w * len, out.data() + i * w * len);
  }
  auto backward_fn = [=](Node<T>& self) {
    auto& dx = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < w * len; ++j)
        dx[(i * c + begin) * len + j] += self.grad[i * w * len + j];
  };
  return make_output<T>({n, w, len}, std::move(out), {&x}, backward_fn, "slice_channels");
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape shape) {
  require(numel(shape) == x.numel(), "reshape: cannot view " + to_string(x.shape()) + " as " +
                                         to_string(shape));
  std::vector<T> out(x.data().begin(), x.data().end());
  auto backward_fn = [](Node<T>& self) {
    auto& dx = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += self.grad[i];
  };
  return make_output<T>(std::move(shape), std::move(out), {&x}, backward_fn, "reshape");
}

template <typename T>
Tensor<T> l1_loss(const Tensor<T>& a, const Tensor<T>& b) {
  require(a.defined() && b.defined() && a.shape() == b.shape(),
          "l1_loss: shape mismatch " + (a.defined() ? to_string(a.shape()) : "?") + " vs " +
              (b.defined() ? to_string(b.shape()) : "?"));
  const std::size_t count = a.numel();
  T acc = T(0);
  for (std::size_t i = 0; i < count; ++i) acc += std::abs(a.data()[i] - b.data()[i]);
  auto backward_fn = [count](Node<T>& self) {
    const T g = self.grad[0] / static_cast<T>(count);
    const auto& av = self.inputs[0]->data;
    const auto& bv = self.inputs[1]->data;
    auto sign = [](T v) { return v > T(0) ? T(1) : (v < T(0) ? T(-1) : T(0)); };
    if (self.inputs[0]->requires_grad) {
      auto& da = self.inputs[0]->ensure_grad();
      for (std::size_t i = 0; i < count; ++i) da[i] += g * sign(av[i] - bv[i]);
    }
    if (self.inputs[1]->requires_grad) {
      auto& db = self.inputs[1]->ensure_grad();
      for (std::size_t i = 0; i < count; ++i) db[i] -= g * sign(av[i] - bv[i]);
    }
  };
  return make_output<T>({}, {acc / static_cast<T>(count)}, {&a, &b}, backward_fn, "l1_loss");
}

template <typename T>
Tensor<T> sum(const Tensor<T>& x) {
  T acc = T(0);
  for (T v : x.data()) acc += v;
  auto backward_fn = [](Node<T>& self) {
    auto& dx = self.inputs[0]->ensure_grad();
    for (auto& v : dx) v += self.grad[0];
  };
  return make_output<T>({}, {acc}, {&x}, backward_fn, "sum");
}

template <typename T>
Tensor<T> mean(const Tensor<T>& x) {
  return scale(sum(x), T(1) / static_cast<T>(x.numel()));
}

template <typename T>
Tensor<T> square(const Tensor<T>& x) {
  std::vector<T> out(x.numel());
  std::transform(x.data().begin(), x.data().end(), out.begin(), [](T v) { return v * v; });
  auto backward_fn = [](Node<T>& self) {
    auto& dx = self.inputs[0]->ensure_grad();
    const auto& xv = self.inputs[0]->data;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += T(2) * xv[i] * self.grad[i];
  };
  return make_output<T>(x.shape(), std::move(out), {&x}, backward_fn, "square");
}

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  require(a.shape() == b.shape(),
          "add: shape mismatch " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  std::vector<T> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
  auto backward_fn = [](Node<T>& self) {
    for (std::size_t k = 0; k < 2; ++k) {
      if (!self.inputs[k]->requires_grad) continue;
      auto& d = self.inputs[k]->ensure_grad();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += self.grad[i];
    }
  };
  return make_output<T>(a.shape(), std::move(out), {&a, &b}, backward_fn, "add");
}

template <typename T>
Tensor<T> scale(const Tensor<T>& x, T factor) {
  std::vector<T> out(x.numel());
  std::transform(x.data().begin(), x.data().end(), out.begin(),
                 [factor](T v) { return v * factor; });
  auto backward_fn = [factor](Node<T>& self) {
    auto& dx = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += factor * self.grad[i];
  };
  return make_output<T>(x.shape(), std::move(out), {&x}, backward_fn, "scale");
}

template <typename T>
Tensor<T> add_scalar(const Tensor<T>& x, T offset) {
  std::vector<T> out(x.numel());
  std::transform(x.data().begin(), x.data().end(), out.begin(),
                 [offset](T v) { return v + offset; });
  auto backward_fn = [](Node<T>& self) {
    auto& dx = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += self.grad[i];
  };
  return make_output<T>(x.shape(), std::move(out), {&x}, backward_fn, "add_scalar");
}

#define DCAE_INSTANTIATE_OPS(T)                                                              \
  template Tensor<T> conv1d(const Tensor<T>&, const Tensor<T>&, std::size_t, std::size_t);   \
  template Tensor<T> conv1d_transposed(const Tensor<T>&, const Tensor<T>&, std::size_t,      \
                                       std::size_t, std::size_t);                            \
  template Tensor<T> prelu(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> tanh_act(const Tensor<T>&);                                             \
  template Tensor<T> batchnorm1d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, T);   \
  template Tensor<T> dense(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);            \
  template Tensor<T> concat_channels(const Tensor<T>&, const Tensor<T>&);                    \
  template Tensor<T> slice_channels(const Tensor<T>&, std::size_t, std::size_t);             \
  template Tensor<T> reshape(const Tensor<T>&, Shape);                                       \
  template Tensor<T> l1_loss(const Tensor<T>&, const Tensor<T>&);                            \
  template Tensor<T> sum(const Tensor<T>&);                                                  \
  template Tensor<T> mean(const Tensor<T>&);                                                 \
  template Tensor<T> square(const Tensor<T>&);                                               \
  template Tensor<T> add(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> scale(const Tensor<T>&, T);                                             \
  template Tensor<T> add_scalar(const Tensor<T>&, T);

DCAE_INSTANTIATE_OPS(float)
DCAE_INSTANTIATE_OPS(double)

#undef DCAE_INSTANTIATE_OPS

}  // namespace dcae
