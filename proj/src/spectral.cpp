// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dcae/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dcae {

RealFft::RealFft(std::size_t size) : size_(size) {
  if (size < 2) throw std::invalid_argument("RealFft: size must be at least 2");
  real_ = fftw_alloc_real(size);
  auto* spec = fftw_alloc_complex(bins());
  spectrum_ = spec;
  const int n = static_cast<int>(size);
  // Accumulated wisdom can steer the planner to a different algorithm for the
  // same size, changing results in the last bit. Plan from a clean slate.
  fftw_forget_wisdom();
  forward_plan_ = fftw_plan_dft_r2c_1d(n, real_, spec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(n, spec, real_, FFTW_ESTIMATE);
  if (!real_ || !spec || !forward_plan_ || !inverse_plan_) {
    throw std::runtime_error("RealFft: FFTW allocation failed");
  }
}

RealFft::~RealFft() {
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_);
  fftw_free(spectrum_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() != size_ || out.size() != bins()) throw std::invalid_argument("RealFft::forward: size mismatch");
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  const auto* spec = static_cast<const fftw_complex*>(spectrum_);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {spec[k][0], spec[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (in.size() != bins() || out.size() != size_) throw std::invalid_argument("RealFft::inverse: size mismatch");
  auto* spec = static_cast<fftw_complex*>(spectrum_);
  for (std::size_t k = 0; k < in.size(); ++k) {
    spec[k][0] = in[k].real();
    spec[k][1] = in[k].imag();
  }
  // c2r overwrites its input; spectrum_ is scratch.
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double norm = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = real_[i] * norm;
}

std::vector<double> sine_window(std::size_t size) {
  std::vector<double> w(size);
  for (std::size_t n = 0; n < size; ++n) {
    w[n] = std::sin(std::numbers::pi * (static_cast<double>(n) + 0.5) / static_cast<double>(size));
  }
  return w;
}

std::vector<double> hann_window(std::size_t size) {
  std::vector<double> w(size);
  for (std::size_t n = 0; n < size; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(size));
  }
  return w;
}

std::size_t frame_count(std::size_t length, std::size_t frame, std::size_t hop) {
  if (length < frame) return 0;
  return (length - frame) / hop + 1;
}

std::vector<std::vector<double>> magnitude_spectrogram(std::span<const float> signal,
                                                       std::size_t fft, std::size_t hop) {
  RealFft transform(fft);
  const auto window = hann_window(fft);
  const std::size_t frames = frame_count(signal.size(), fft, hop);
  std::vector<std::vector<double>> out(frames, std::vector<double>(transform.bins()));
  std::vector<double> buf(fft);
  std::vector<std::complex<double>> spec(transform.bins());
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t i = 0; i < fft; ++i) buf[i] = window[i] * signal[f * hop + i];
    transform.forward(buf, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) out[f][k] = std::abs(spec[k]);
  }
  return out;
}

}  // namespace dcae
