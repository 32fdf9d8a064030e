// Copyright 2026 DCAE contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dcae/metrics.hpp"

namespace dcae {
namespace {

std::vector<float> signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> d(0.0f, 0.1f);
  std::vector<float> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = 0.3f * std::sin(0.05f * float(i)) + d(rng);
  return v;
}

// ref + white noise whose power is `rel_db` below the reference power.
std::vector<float> with_noise(const std::vector<float>& ref, double rel_db, std::uint64_t seed) {
  double power = 0.0;
  for (float v : ref) power += double(v) * v;
  power /= double(ref.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, std::sqrt(power * std::pow(10.0, rel_db / 10.0)));
  auto out = ref;
  for (auto& v : out) v = float(v + d(rng));
  return out;
}

TEST(SegSnr, CeilingAndFloor) {
  const auto x = signal(16000, 1);
  EXPECT_EQ(segmental_snr(x, x), kSegSnrCeilingDb);
  std::vector<float> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  // -x gives a per-frame SNR of 10*log10(1/4) = -6 dB, inside the clamp.
  EXPECT_NEAR(segmental_snr(x, neg), -6.0206, 1e-3);
  std::vector<float> far(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) far[i] = -4.0f * x[i];
  EXPECT_EQ(segmental_snr(x, far), kSegSnrFloorDb);
}

TEST(SegSnr, KnownNoiseLevel) {
  const auto x = signal(48000, 2);
  EXPECT_NEAR(segmental_snr(x, with_noise(x, -20.0, 3)), 20.0, 1.0);
}

TEST(SegSnr, SilentFramesSkipped) {
  auto x = signal(4096, 4);
  std::fill(x.begin(), x.begin() + 2048, 0.0f);
  auto y = x;
  // Error confined to frames whose reference is entirely silent.
  for (std::size_t i = 0; i < 1536; ++i) y[i] = 0.5f;
  EXPECT_EQ(segmental_snr(x, y), kSegSnrCeilingDb);
  EXPECT_THROW(segmental_snr(x, std::vector<float>(10)), std::invalid_argument);
}

TEST(Lsd, IdentityScalingAndSymmetry) {
  const auto x = signal(20000, 5);
  EXPECT_EQ(log_spectral_distance(x, x), 0.0);
  auto twice = x;
  for (auto& v : twice) v *= 2.0f;
  EXPECT_NEAR(log_spectral_distance(x, twice), 20.0 * std::log10(2.0), 1e-4);
  const auto y = with_noise(x, -10.0, 6);
  EXPECT_DOUBLE_EQ(log_spectral_distance(x, y), log_spectral_distance(y, x));
  EXPECT_EQ(log_spectral_distance(std::vector<float>(100), std::vector<float>(100, 1.0f)), 0.0);
}

TEST(Metrics, MonotoneInNoiseLevel) {
  const auto x = signal(32000, 7);
  double prev_snr = 1e9, prev_lsd = -1.0;
  for (double level : {-30.0, -20.0, -10.0}) {
    const auto y = with_noise(x, level, 8);
    const double snr = segmental_snr(x, y), lsd = log_spectral_distance(x, y);
    EXPECT_LT(snr, prev_snr) << level;
    EXPECT_GT(lsd, prev_lsd) << level;
    prev_snr = snr;
    prev_lsd = lsd;
  }
}

TEST(Rtf, Arithmetic) {
  EXPECT_DOUBLE_EQ(rtf(10.0, 2.0), 5.0);
  EXPECT_DOUBLE_EQ(rtf(7.0, 1.0), 7.0);
  EXPECT_DOUBLE_EQ(rtf(1.0, 1.0), 1.0);
  EXPECT_THROW(rtf(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(rtf(0.0, 1.0), std::invalid_argument);
}

TEST(EvalReport, TsvAndJson) {
  EvalReport r;
  r.entries.push_back({"a.wav", 100, 12.5, 3.25, 4.0});
  r.entries.push_back({"b.wav", 50, 35.0, 0.0, std::nullopt});
  std::ostringstream tsv;
  r.write_tsv(tsv);
  EXPECT_EQ(tsv.str(),
            "file\tsamples\tseg_snr_db\tlsd_db\trtf\n"
            "a.wav\t100\t12.5\t3.25\t4\n"
            "b.wav\t50\t35\t0\t-\n");
  const auto j = r.to_json();
  ASSERT_EQ(j["files"].size(), 2u);
  EXPECT_EQ(j["files"][0]["rtf"], 4.0);
  EXPECT_TRUE(j["files"][1]["rtf"].is_null());
  EXPECT_EQ(j["files"][1]["samples"], 50);
}

TEST(Spectrogram, CsvShape) {
  const auto x = signal(5000, 9);
  std::ostringstream csv;
  write_spectrogram_csv(csv, x);
  std::istringstream lines(csv.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 512);
  }
  EXPECT_EQ(rows, (5000 - 1024) / 512 + 1);
}

}  // namespace
}  // namespace dcae
