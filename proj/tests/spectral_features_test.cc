// Copyright 2026 The sidfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sidfuse/spectral_features.h"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.h"
#include "sidfuse/error.h"

using namespace sidfuse;

TEST_CASE("power spectrum of a zero frame") {
  for (double p : PowerSpectrum(std::vector<double>(160, 0.0), 256)) CHECK(p == 0.0);
  CHECK(PowerSpectrum(std::vector<double>(160, 0.0), 256).size() == 129);
}

TEST_CASE("bin-aligned cosine concentrates in one bin") {
  std::vector<double> x(256);
  for (std::size_t n = 0; n < x.size(); ++n)
    x[n] = std::cos(2.0 * std::numbers::pi * 10.0 * n / 256.0);
  const auto p = PowerSpectrum(x, 256);
  CHECK(p[10] == doctest::Approx(128.0 * 128.0).epsilon(1e-9));
  for (std::size_t b = 0; b < p.size(); ++b)
    if (b != 10) CHECK(p[b] < 1e-12 * p[10]);
}

TEST_CASE("power spectrum agrees with a direct DFT and Parseval") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto frame = oracle::SpeechLikeFrame(rng);
    const auto fast = PowerSpectrum(frame, 256);
    const auto slow = oracle::NaivePowerSpectrum(frame, 256);
    for (std::size_t b = 0; b < fast.size(); ++b)
      CHECK(fast[b] == doctest::Approx(slow[b]).epsilon(1e-9).scale(1e-12));

    double time_energy = 0.0;
    for (double v : frame) time_energy += v * v;
    double spec = fast.front() + fast.back();
    for (std::size_t b = 1; b + 1 < fast.size(); ++b) spec += 2.0 * fast[b];
    CHECK(std::abs(time_energy - spec / 256.0) <= 1e-9 * time_energy);
  }
}

TEST_CASE("filterbank geometry") {
  for (FilterScale scale : {FilterScale::kMel, FilterScale::kLinear}) {
    const FilterBank bank(20, scale, 256, 8000.0);
    REQUIRE(bank.num_filters() == 20);
    REQUIRE(bank.edges_hz().size() == 22);
    CHECK(bank.edges_hz().front() == 0.0);
    CHECK(bank.edges_hz().back() == 4000.0);
    for (std::size_t j = 0; j + 1 < bank.edges_hz().size(); ++j)
      CHECK(bank.edges_hz()[j] < bank.edges_hz()[j + 1]);
    for (std::size_t j = 0; j < 20; ++j) {
      double peak = 0.0;
      std::size_t argmax = 0;
      for (std::size_t b = 0; b < bank.num_bins(); ++b) {
        CHECK(bank.weights(j)[b] >= 0.0);
        if (bank.weights(j)[b] > peak) {
          peak = bank.weights(j)[b];
          argmax = b;
        }
      }
      CHECK(peak <= 1.0);
      CHECK(peak > 0.5);
      // Peak bin lies next to the filter center; support ends at the next
      // filter's center.
      CHECK(std::abs(argmax * 8000.0 / 256.0 - bank.edges_hz()[j + 1]) <= 8000.0 / 256.0);
      for (std::size_t b = 0; b < bank.num_bins(); ++b) {
        const double f = b * 8000.0 / 256.0;
        if (f <= bank.edges_hz()[j] || f >= bank.edges_hz()[j + 2])
          CHECK(bank.weights(j)[b] == 0.0);
      }
    }
  }
}

TEST_CASE("filterbank energies: floor and flat spectrum") {
  const FilterBank bank(20, FilterScale::kMel, 256, 8000.0);
  for (double e : bank.LogEnergies(std::vector<double>(129, 0.0)))
    CHECK(e == std::log(1e-10));

  const auto flat = bank.LogEnergies(std::vector<double>(129, 1.0));
  for (std::size_t j = 0; j < 20; ++j) {
    double area = 0.0;
    for (double w : bank.weights(j)) area += w;
    CHECK(flat[j] == doctest::Approx(std::log(area)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(bank.LogEnergies(std::vector<double>(100, 1.0)), Error);
}

TEST_CASE("linear bank areas are uniform, mel areas grow") {
  const FilterBank linear(20, FilterScale::kLinear, 256, 8000.0);
  const FilterBank mel(20, FilterScale::kMel, 256, 8000.0);
  auto area = [](const FilterBank &bank, std::size_t j) {
    double a = 0.0;
    for (double w : bank.weights(j)) a += w;
    return a;
  };
  double lo = 1e9, hi = 0.0;
  for (std::size_t j = 0; j < 20; ++j) {
    lo = std::min(lo, area(linear, j));
    hi = std::max(hi, area(linear, j));
  }
  CHECK(hi / lo <= 1.05);
  // Mel triangles widen with center frequency.
  for (std::size_t j = 0; j + 1 < 20; ++j) {
    const auto &e = mel.edges_hz();
    CHECK(e[j + 3] - e[j + 1] > e[j + 2] - e[j]);
  }
  CHECK(area(mel, 19) > 3.0 * area(mel, 0));
  for (std::size_t j = 2; j < 20; ++j) CHECK(area(mel, j) > area(mel, j - 2));
}

TEST_CASE("filterbank energies shift by log(alpha) under spectral scaling") {
  std::mt19937_64 rng(2);
  const FilterBank bank(20, FilterScale::kMel, 256, 8000.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = PowerSpectrum(oracle::SpeechLikeFrame(rng), 256);
    auto scaled = p;
    const double alpha = 3.7;
    for (double &v : scaled) v *= alpha;
    const auto a = bank.LogEnergies(p);
    const auto b = bank.LogEnergies(scaled);
    for (std::size_t j = 0; j < 20; ++j) CHECK(b[j] == doctest::Approx(a[j] + std::log(alpha)).epsilon(1e-12));
  }
}

TEST_CASE("cepstra from energies") {
  const auto zero = CepstraFromEnergies(std::vector<double>(20, 3.25), 19);
  REQUIRE(zero.size() == 19);
  for (double c : zero) CHECK(std::abs(c) < 1e-12);

  std::vector<double> onehot(20, 0.0);
  onehot[0] = 1.0;
  const auto c = CepstraFromEnergies(onehot, 19);
  const auto naive = oracle::NaiveDct(onehot);
  for (std::size_t i = 1; i <= 19; ++i) {
    CHECK(c[i - 1] == doctest::Approx(naive[i]).epsilon(1e-12));
    CHECK(c[i - 1] == doctest::Approx(std::sqrt(0.1) * std::cos(std::numbers::pi * i * 0.5 / 20.0)).epsilon(1e-12));
  }

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> e(20);
    for (double &v : e) v = g(rng);
    const auto base = CepstraFromEnergies(e, 19);
    const auto naive_all = oracle::NaiveDct(e);
    for (std::size_t i = 1; i <= 19; ++i)
      CHECK(base[i - 1] == doctest::Approx(naive_all[i]).epsilon(1e-10).scale(1e-10));
    const double shift = g(rng);
    for (double &v : e) v += shift;
    const auto shifted = CepstraFromEnergies(e, 19);
    for (std::size_t i = 0; i < 19; ++i) CHECK(std::abs(shifted[i] - base[i]) <= 1e-12 * (1.0 + std::abs(shift)) * 20);
  }
  CHECK_THROWS_AS(CepstraFromEnergies(std::vector<double>(19, 0.0), 19), Error);
}

TEST_CASE("LPCC recursion") {
  LpCoefficients flat;
  flat.a.assign(19, 0.0);
  for (double c : LpccFromLp(flat, 19)) CHECK(c == 0.0);

  LpCoefficients one;
  const double alpha = -0.7;
  one.a = {alpha};
  const auto c = LpccFromLp(one, 19);
  REQUIRE(c.size() == 19);
  // log(1 / (1 + alpha z^-1)) = sum_n (-1)^n alpha^n / n z^-n
  for (std::size_t n = 1; n <= 19; ++n)
    CHECK(c[n - 1] == doctest::Approx(std::pow(-alpha, n) / n).epsilon(1e-12));
  CHECK(c[0] == doctest::Approx(-alpha));
  CHECK(c[1] == doctest::Approx(alpha * alpha / 2.0));
  CHECK(c[2] == doctest::Approx(-alpha * alpha * alpha / 3.0));
}

TEST_CASE("LPCC matches the cepstrum of the all-pole log spectrum") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const LpCoefficients lp = ComputeLp(oracle::SpeechLikeFrame(rng), 19);
    const auto c = LpccFromLp(lp, 19);
    // Real cepstrum of 1/A on a dense grid; for a minimum-phase model the
    // complex cepstrum is twice the real cepstrum for n >= 1.
    const std::size_t grid = 8192;
    std::vector<double> logmag(grid);
    for (std::size_t g = 0; g < grid; ++g) {
      const double w = 2.0 * std::numbers::pi * g / grid;
      std::complex<double> a = 1.0;
      for (std::size_t k = 1; k <= lp.order(); ++k)
        a += lp.a[k - 1] * std::polar(1.0, -w * static_cast<double>(k));
      logmag[g] = -std::log(std::abs(a));
    }
    for (std::size_t n = 1; n <= 19; ++n) {
      double acc = 0.0;
      for (std::size_t g = 0; g < grid; ++g)
        acc += logmag[g] * std::cos(2.0 * std::numbers::pi * n * g / grid);
      CHECK(std::abs(2.0 * acc / grid - c[n - 1]) < 1e-6);
    }

    LpCoefficients louder = lp;
    louder.gain *= 1000.0;
    CHECK(LpccFromLp(louder, 19) == c);
  }
}

TEST_CASE("every spectral kind yields 19 values per frame") {
  std::mt19937_64 rng(5);
  FrameSequence seq;
  for (int f = 0; f < 5; ++f) seq.frames.push_back(oracle::SpeechLikeFrame(rng));
  for (FeatureKind kind : {FeatureKind::kMfcc, FeatureKind::kLfcc, FeatureKind::kLpcc}) {
    SpectralConfig cfg;
    cfg.kind = kind;
    const SpectralExtractor ex(cfg);
    const auto feats = ex.ComputeAll(seq);
    REQUIRE(feats.size() == 5);
    for (const auto &v : feats) {
      CHECK(v.size() == 19);
      for (double x : v) CHECK(std::isfinite(x));
    }
    CHECK(ex.ComputeAll(seq) == feats);
  }
  SpectralConfig hosmr;
  hosmr.kind = FeatureKind::kHosmr;
  CHECK_THROWS_AS(SpectralExtractor{hosmr}, Error);
}

TEST_CASE("feature kind names round trip") {
  for (FeatureKind kind : {FeatureKind::kMfcc, FeatureKind::kLfcc, FeatureKind::kLpcc, FeatureKind::kHosmr})
    CHECK(ParseFeatureKind(FeatureKindName(kind)) == kind);
  CHECK(ParseFeatureKind("MFCC") == FeatureKind::kMfcc);
  CHECK_THROWS_AS(ParseFeatureKind("plpcc"), Error);
}
