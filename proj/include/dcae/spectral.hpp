// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DCAE_SPECTRAL_HPP_
#define DCAE_SPECTRAL_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dcae {

// Real-input FFT of a fixed size (FFTW, estimate-mode plans).
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return size_; }
  std::size_t bins() const { return size_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Normalised so that inverse(forward(x)) == x.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t size_;
  double* real_ = nullptr;
  void* spectrum_ = nullptr;  // fftw_complex*
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

// sin(pi (n + 0.5) / N): its square overlap-adds to one at 50% hop.
std::vector<double> sine_window(std::size_t size);
// Periodic Hann window.
std::vector<double> hann_window(std::size_t size);

// Number of full frames; trailing samples that do not fill a frame are ignored.
std::size_t frame_count(std::size_t length, std::size_t frame, std::size_t hop);

// Hann-windowed magnitude spectrogram, one row of fft/2+1 bins per frame.
std::vector<std::vector<double>> magnitude_spectrogram(std::span<const float> signal,
                                                       std::size_t fft, std::size_t hop);

}  // namespace dcae

#endif  // DCAE_SPECTRAL_HPP_
