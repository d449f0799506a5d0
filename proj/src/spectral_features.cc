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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "sidfuse/error.h"

namespace sidfuse {

std::string_view FeatureKindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kMfcc: return "mfcc";
    case FeatureKind::kLfcc: return "lfcc";
    case FeatureKind::kLpcc: return "lpcc";
    case FeatureKind::kHosmr: return "hosmr";
  }
  return "unknown";
}

FeatureKind ParseFeatureKind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "mfcc") return FeatureKind::kMfcc;
  if (lower == "lfcc") return FeatureKind::kLfcc;
  if (lower == "lpcc") return FeatureKind::kLpcc;
  if (lower == "hosmr") return FeatureKind::kHosmr;
  throw Error(ErrorCode::kParseError, "unknown feature kind '" + lower + "'");
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

void Fft(std::vector<std::complex<double>> &data) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw Error(ErrorCode::kInvalidArgument, "FFT size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = std::polar(1.0, angle * static_cast<double>(k));
        const std::complex<double> u = data[start + k];
        const std::complex<double> v = data[start + k + len / 2] * w;
        data[start + k] = u + v;
        data[start + k + len / 2] = u - v;
      }
    }
  }
}

std::vector<double> PowerSpectrum(std::span<const double> frame,
                                  std::size_t fft_size) {
  if (frame.size() > fft_size)
    throw Error(ErrorCode::kInvalidArgument, "frame longer than FFT size");
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t n = 0; n < frame.size(); ++n) buf[n] = frame[n];
  Fft(buf);
  std::vector<double> power(fft_size / 2 + 1);
  for (std::size_t b = 0; b < power.size(); ++b) power[b] = std::norm(buf[b]);
  return power;
}

FilterBank::FilterBank(std::size_t num_filters, FilterScale scale,
                       std::size_t fft_size, double sample_rate)
    : fft_size_(fft_size), scale_(scale) {
  if (num_filters == 0 || fft_size < 2 || !(sample_rate > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "bad filterbank parameters");

  const double nyquist = sample_rate / 2.0;
  const double lo = 0.0;
  const double hi = scale == FilterScale::kMel ? HzToMel(nyquist) : nyquist;
  edges_hz_.resize(num_filters + 2);
  for (std::size_t i = 0; i < edges_hz_.size(); ++i) {
    const double pos =
        lo + (hi - lo) * static_cast<double>(i) /
                 static_cast<double>(num_filters + 1);
    edges_hz_[i] = scale == FilterScale::kMel ? MelToHz(pos) : pos;
  }
  edges_hz_.front() = 0.0;
  edges_hz_.back() = nyquist;

  const std::size_t bins = fft_size / 2 + 1;
  const double bin_hz = sample_rate / static_cast<double>(fft_size);
  weights_.assign(num_filters, std::vector<double>(bins, 0.0));
  for (std::size_t j = 0; j < num_filters; ++j) {
    const double left = edges_hz_[j];
    const double center = edges_hz_[j + 1];
    const double right = edges_hz_[j + 2];
    for (std::size_t b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * bin_hz;
      double w = 0.0;
      if (f > left && f <= center)
        w = (f - left) / (center - left);
      else if (f > center && f < right)
        w = (right - f) / (right - center);
      weights_[j][b] = w;
    }
  }
}

std::vector<double> FilterBank::LogEnergies(
    std::span<const double> spectrum) const {
  if (spectrum.size() != num_bins())
    throw Error(ErrorCode::kInvalidArgument,
                "spectrum has " + std::to_string(spectrum.size()) +
                    " bins, filterbank expects " + std::to_string(num_bins()));
  std::vector<double> out(weights_.size());
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    double acc = 0.0;
    for (std::size_t b = 0; b < spectrum.size(); ++b)
      acc += weights_[j][b] * spectrum[b];
    out[j] = std::log(std::max(acc, kLogEnergyFloor));
  }
  return out;
}

std::vector<double> CepstraFromEnergies(std::span<const double> energies,
                                        std::size_t num_cepstra) {
  const std::size_t n = energies.size();
  if (num_cepstra + 1 > n)
    throw Error(ErrorCode::kInvalidArgument,
                "need more energies than retained cepstra");
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  std::vector<double> out(num_cepstra);
  for (std::size_t i = 1; i <= num_cepstra; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += energies[j] * std::cos(std::numbers::pi * static_cast<double>(i) *
                                    (static_cast<double>(j) + 0.5) /
                                    static_cast<double>(n));
    out[i - 1] = scale * acc;
  }
  return out;
}

std::vector<double> LpccFromLp(const LpCoefficients &lp,
                               std::size_t num_cepstra) {
  const std::size_t p = lp.order();
  auto coeff = [&](std::size_t m) { return m <= p ? lp.a[m - 1] : 0.0; };
  std::vector<double> c(num_cepstra + 1, 0.0);
  for (std::size_t n = 1; n <= num_cepstra; ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k < n; ++k)
      acc += static_cast<double>(k) * c[k] * coeff(n - k);
    c[n] = -coeff(n) - acc / static_cast<double>(n);
  }
  return {c.begin() + 1, c.end()};
}

SpectralExtractor::SpectralExtractor(const SpectralConfig &cfg) : cfg_(cfg) {
  if (cfg.num_cepstra == 0)
    throw Error(ErrorCode::kInvalidArgument, "num_cepstra must be positive");
  switch (cfg.kind) {
    case FeatureKind::kMfcc:
      bank_.emplace_back(cfg.num_filters, FilterScale::kMel, cfg.fft_size,
                         cfg.sample_rate);
      break;
    case FeatureKind::kLfcc:
      bank_.emplace_back(cfg.num_filters, FilterScale::kLinear, cfg.fft_size,
                         cfg.sample_rate);
      break;
    case FeatureKind::kLpcc:
      if (cfg.lpcc_order == 0)
        throw Error(ErrorCode::kInvalidArgument, "lpcc_order must be positive");
      break;
    case FeatureKind::kHosmr:
      throw Error(ErrorCode::kInvalidArgument,
                  "hosmr is not a spectral feature kind");
  }
}

std::vector<double> SpectralExtractor::Compute(
    std::span<const double> frame) const {
  if (cfg_.kind == FeatureKind::kLpcc)
    return LpccFromLp(ComputeLp(frame, cfg_.lpcc_order), cfg_.num_cepstra);
  const FilterBank &bank = bank_.front();
  return CepstraFromEnergies(
      bank.LogEnergies(PowerSpectrum(frame, bank.fft_size())),
      cfg_.num_cepstra);
}

std::vector<std::vector<double>> SpectralExtractor::ComputeAll(
    const FrameSequence &frames) const {
  std::vector<std::vector<double>> out;
  out.reserve(frames.size());
  for (const auto &frame : frames.frames) {
    try {
      out.push_back(Compute(frame));
    } catch (const Error &err) {
      if (err.code() != ErrorCode::kDegenerateFrame) throw;
    }
  }
  if (out.empty())
    throw Error(ErrorCode::kNoUsableFrames, "no usable spectral frames");
  return out;
}

}  // namespace sidfuse
