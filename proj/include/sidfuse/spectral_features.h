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

// Short-term spectral baselines: MFCC and LFCC from a triangular filterbank,
// and LPCC from the all-pole model.

#ifndef SIDFUSE_SPECTRAL_FEATURES_H_
#define SIDFUSE_SPECTRAL_FEATURES_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sidfuse/audio_frontend.h"
#include "sidfuse/lp_residual.h"

namespace sidfuse {

enum class FeatureKind : unsigned { kMfcc = 0, kLfcc = 1, kLpcc = 2, kHosmr = 3 };

std::string_view FeatureKindName(FeatureKind kind);
/// Accepts "mfcc", "lfcc", "lpcc", "hosmr" (case-insensitive).
FeatureKind ParseFeatureKind(std::string_view name);

enum class FilterScale { kMel, kLinear };

inline constexpr double kLogEnergyFloor = 1e-10;

double HzToMel(double hz);
double MelToHz(double mel);

/// In-place iterative radix-2 FFT. Size must be a power of two.
void Fft(std::vector<std::complex<double>> &data);

/// |DFT|^2 of the zero-padded frame, fft_size / 2 + 1 bins.
std::vector<double> PowerSpectrum(std::span<const double> frame,
                                  std::size_t fft_size);

class FilterBank {
 public:
  /// Triangular filters with unit peak height, centers equally spaced on the
  /// chosen scale between 0 and sample_rate / 2. Filter j spans
  /// [edge_j, edge_{j+2}] and peaks at edge_{j+1}.
  FilterBank(std::size_t num_filters, FilterScale scale, std::size_t fft_size,
             double sample_rate);

  std::size_t num_filters() const { return weights_.size(); }
  std::size_t fft_size() const { return fft_size_; }
  std::size_t num_bins() const { return fft_size_ / 2 + 1; }
  FilterScale scale() const { return scale_; }

  /// Weights of filter j over all bins (zero outside its support).
  const std::vector<double> &weights(std::size_t j) const { return weights_[j]; }
  /// Edge frequencies in Hz, num_filters + 2 values.
  const std::vector<double> &edges_hz() const { return edges_hz_; }

  /// log(max(sum_b w_j(b) P(b), floor)) per filter.
  std::vector<double> LogEnergies(std::span<const double> spectrum) const;

 private:
  std::size_t fft_size_;
  FilterScale scale_;
  std::vector<double> edges_hz_;
  std::vector<std::vector<double>> weights_;
};

/// Orthonormal DCT-II of the log energies with the dc term dropped.
/// Returns coefficients 1 .. num_cepstra.
std::vector<double> CepstraFromEnergies(std::span<const double> energies,
                                        std::size_t num_cepstra);

/// c_n = -a_n - (1/n) sum_{k=1}^{n-1} k c_k a_{n-k}, n = 1 .. num_cepstra.
std::vector<double> LpccFromLp(const LpCoefficients &lp,
                               std::size_t num_cepstra);

struct SpectralConfig {
  FeatureKind kind = FeatureKind::kMfcc;
  std::size_t num_filters = 20;
  std::size_t num_cepstra = 19;
  std::size_t fft_size = 256;
  std::size_t lpcc_order = 19;
  double sample_rate = 8000.0;
};

/// Per-frame feature extractor; the filterbank is built once.
class SpectralExtractor {
 public:
  explicit SpectralExtractor(const SpectralConfig &cfg);

  const SpectralConfig &config() const { return cfg_; }

  /// Throws kDegenerateFrame for an all-zero frame in LPCC mode.
  std::vector<double> Compute(std::span<const double> frame) const;

  /// Applies Compute to each frame; LPCC frames that are degenerate are
  /// skipped. Throws kNoUsableFrames if nothing survives.
  std::vector<std::vector<double>> ComputeAll(const FrameSequence &frames) const;

 private:
  SpectralConfig cfg_;
  std::vector<FilterBank> bank_;  // empty for LPCC
};

}  // namespace sidfuse

#endif  // SIDFUSE_SPECTRAL_FEATURES_H_
