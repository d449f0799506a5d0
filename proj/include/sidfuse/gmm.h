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

// Diagonal-covariance Gaussian mixture models: LBG initialisation, EM
// training, log-domain scoring and the binary model record.

#ifndef SIDFUSE_GMM_H_
#define SIDFUSE_GMM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sidfuse/spectral_features.h"

namespace sidfuse {

using FeatureMatrix = std::vector<std::vector<double>>;

struct GmmModel {
  std::vector<double> weights;                 // M
  std::vector<std::vector<double>> means;      // M x d
  std::vector<std::vector<double>> variances;  // M x d, diagonal
  FeatureKind feature_kind = FeatureKind::kMfcc;

  std::size_t num_components() const { return weights.size(); }
  std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }

  /// Checks shapes, weight normalisation (1e-9), non-negative weights and
  /// strictly positive finite variances. Throws kInvalidArgument.
  void Validate() const;

  bool operator==(const GmmModel &) const = default;
};

struct TrainingConfig {
  std::size_t num_components = 8;
  std::size_t em_iterations = 10;
  double variance_floor_factor = 0.01;
  double lbg_split_epsilon = 0.02;
  // Carried for reproducibility records; LBG and EM here are deterministic
  // and draw no random numbers.
  std::uint64_t seed = 0;

  void Validate() const;
};

/// Sorts feature vectors lexicographically. Training runs on this order so
/// the result does not depend on how the caller ordered the data.
FeatureMatrix CanonicalOrder(FeatureMatrix features);

/// Per-dimension floor: variance_floor_factor times the global variance,
/// never below a tiny positive constant.
std::vector<double> VarianceFloor(const FeatureMatrix &features,
                                  double factor);

/// Binary-splitting LBG codebook turned into an initial mixture. M must be a
/// power of two. Throws kInsufficientData when there are fewer vectors than
/// components.
GmmModel LbgInit(const FeatureMatrix &features, const TrainingConfig &cfg);

double ComponentLogDensity(std::span<const double> x, std::size_t component,
                           const GmmModel &model);

/// log sum_i p_i b_i(x), max-shifted.
double LogLikelihood(std::span<const double> x, const GmmModel &model);

/// sum_t log p(x_t | model).
double TotalLogLikelihood(const FeatureMatrix &features, const GmmModel &model);

struct EmResult {
  GmmModel model;
  double initial_log_likelihood = 0.0;
  std::vector<double> log_likelihoods;  // after each iteration
  std::size_t collapsed_resets = 0;
  bool data_starved = false;  // fewer than 10 vectors per component
};

/// Exactly cfg.em_iterations EM passes starting from `init`.
EmResult EmTrain(const FeatureMatrix &features, const GmmModel &init,
                 const TrainingConfig &cfg);

/// LbgInit followed by EmTrain; the returned model carries `kind`.
EmResult TrainGmm(const FeatureMatrix &features, const TrainingConfig &cfg,
                  FeatureKind kind);

// Model record: "SIDM", u32 version, u32 feature kind, u32 d, u32 M, then
// weights, means and variances as little-endian float64, then a CRC-32 of
// every preceding byte.
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::vector<std::uint8_t> SerializeModel(const GmmModel &model);
/// Throws kCorruptModel on bad magic, version, size or checksum.
GmmModel DeserializeModel(std::span<const std::uint8_t> bytes);

void SaveModel(const GmmModel &model, const std::filesystem::path &path);
GmmModel LoadModel(const std::filesystem::path &path);

}  // namespace sidfuse

#endif  // SIDFUSE_GMM_H_
