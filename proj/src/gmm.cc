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

#include "sidfuse/gmm.h"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <string>

#include "sidfuse/error.h"

namespace sidfuse {
namespace {

constexpr double kAbsoluteVarianceFloor = 1e-30;
constexpr double kCollapseThreshold = 1e-10;
constexpr double kKmeansTolerance = 1e-6;
constexpr std::size_t kKmeansMaxPasses = 50;

void CheckFeatures(const FeatureMatrix &features) {
  if (features.empty())
    throw Error(ErrorCode::kInsufficientData, "no feature vectors");
  const std::size_t d = features.front().size();
  if (d == 0) throw Error(ErrorCode::kInvalidArgument, "zero-dimensional features");
  for (const auto &x : features) {
    if (x.size() != d)
      throw Error(ErrorCode::kInvalidArgument, "ragged feature matrix");
    for (double v : x)
      if (!std::isfinite(v))
        throw Error(ErrorCode::kInvalidArgument, "non-finite feature value");
  }
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

struct Partition {
  std::vector<std::size_t> label;
  std::vector<double> dist;
  std::vector<std::size_t> count;
};

Partition Assign(const FeatureMatrix &data, const FeatureMatrix &centroids) {
  Partition part;
  part.label.resize(data.size());
  part.dist.resize(data.size());
  part.count.assign(centroids.size(), 0);
  for (std::size_t t = 0; t < data.size(); ++t) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double dist = SquaredDistance(data[t], centroids[c]);
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    part.label[t] = best;
    part.dist[t] = best_dist;
    ++part.count[best];
  }
  return part;
}

// Moves the farthest point of a multi-member cell into each empty cell.
void FillEmptyCells(const FeatureMatrix &data, FeatureMatrix &centroids,
                    Partition &part) {
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (part.count[c] > 0) continue;
    std::size_t donor = data.size();
    double far = -1.0;
    for (std::size_t t = 0; t < data.size(); ++t) {
      if (part.count[part.label[t]] > 1 && part.dist[t] > far) {
        far = part.dist[t];
        donor = t;
      }
    }
    if (donor == data.size())
      throw Error(ErrorCode::kInsufficientData,
                  "cannot populate every LBG cell");
    --part.count[part.label[donor]];
    part.label[donor] = c;
    part.dist[donor] = 0.0;
    part.count[c] = 1;
    centroids[c] = data[donor];
  }
}

FeatureMatrix CellMeans(const FeatureMatrix &data, const Partition &part,
                        std::size_t cells) {
  const std::size_t d = data.front().size();
  FeatureMatrix means(cells, std::vector<double>(d, 0.0));
  for (std::size_t t = 0; t < data.size(); ++t)
    for (std::size_t k = 0; k < d; ++k) means[part.label[t]][k] += data[t][k];
  for (std::size_t c = 0; c < cells; ++c)
    for (std::size_t k = 0; k < d; ++k)
      means[c][k] /= static_cast<double>(part.count[c]);
  return means;
}

void GlobalMoments(const FeatureMatrix &data, std::vector<double> &mean,
                   std::vector<double> &var) {
  const std::size_t d = data.front().size();
  const double n = static_cast<double>(data.size());
  mean.assign(d, 0.0);
  var.assign(d, 0.0);
  for (const auto &x : data)
    for (std::size_t k = 0; k < d; ++k) mean[k] += x[k];
  for (std::size_t k = 0; k < d; ++k) mean[k] /= n;
  for (const auto &x : data)
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = x[k] - mean[k];
      var[k] += diff * diff;
    }
  for (std::size_t k = 0; k < d; ++k) var[k] /= n;
}

double LogSumExp(std::span<const double> values) {
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

// Per-component constant: log p_i - 0.5 (d log 2pi + sum_k log var_ik).
std::vector<double> ComponentConstants(const GmmModel &model) {
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  std::vector<double> out(model.num_components());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double log_det = 0.0;
    for (double v : model.variances[i]) log_det += std::log(v);
    out[i] = std::log(model.weights[i]) -
             0.5 * (static_cast<double>(model.dim()) * log_2pi + log_det);
  }
  return out;
}

double Mahalanobis(std::span<const double> x, std::span<const double> mean,
                   std::span<const double> var) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - mean[k];
    acc += diff * diff / var[k];
  }
  return acc;
}

void NormalizeWeights(std::vector<double> &weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  for (double &w : weights) w /= total;
}

}  // namespace

void GmmModel::Validate() const {
  const std::size_t m = num_components();
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "model has no components");
  if (means.size() != m || variances.size() != m)
    throw Error(ErrorCode::kInvalidArgument, "component count mismatch");
  const std::size_t d = dim();
  if (d == 0) throw Error(ErrorCode::kInvalidArgument, "zero-dimensional model");
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
      throw Error(ErrorCode::kInvalidArgument, "negative or non-finite weight");
    total += weights[i];
    if (means[i].size() != d || variances[i].size() != d)
      throw Error(ErrorCode::kInvalidArgument, "dimension mismatch");
    for (std::size_t k = 0; k < d; ++k) {
      if (!std::isfinite(means[i][k]))
        throw Error(ErrorCode::kInvalidArgument, "non-finite mean");
      if (!(variances[i][k] > 0.0) || !std::isfinite(variances[i][k]))
        throw Error(ErrorCode::kInvalidArgument, "variance must be positive");
    }
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw Error(ErrorCode::kInvalidArgument, "weights do not sum to one");
}

void TrainingConfig::Validate() const {
  if (num_components == 0)
    throw Error(ErrorCode::kInvalidArgument, "need at least one component");
  if (em_iterations == 0)
    throw Error(ErrorCode::kInvalidArgument, "need at least one EM iteration");
  if (!(variance_floor_factor >= 0.0))
    throw Error(ErrorCode::kInvalidArgument, "variance_floor_factor < 0");
  if (!(lbg_split_epsilon > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "lbg_split_epsilon must be > 0");
}

FeatureMatrix CanonicalOrder(FeatureMatrix features) {
  std::sort(features.begin(), features.end());
  return features;
}

std::vector<double> VarianceFloor(const FeatureMatrix &features,
                                  double factor) {
  CheckFeatures(features);
  std::vector<double> mean, var;
  GlobalMoments(features, mean, var);
  for (double &v : var) v = std::max(factor * v, kAbsoluteVarianceFloor);
  return var;
}

GmmModel LbgInit(const FeatureMatrix &features, const TrainingConfig &cfg) {
  cfg.Validate();
  CheckFeatures(features);
  const std::size_t m = cfg.num_components;
  if (!std::has_single_bit(m))
    throw Error(ErrorCode::kInvalidArgument,
                "LBG needs a power-of-two component count, got " +
                    std::to_string(m));
  if (features.size() < m)
    throw Error(ErrorCode::kInsufficientData,
                std::to_string(features.size()) + " vectors for " +
                    std::to_string(m) + " components");

  const FeatureMatrix data = CanonicalOrder(features);
  const std::size_t d = data.front().size();
  std::vector<double> global_mean, global_var;
  GlobalMoments(data, global_mean, global_var);
  std::vector<double> spread(d);
  for (std::size_t k = 0; k < d; ++k)
    spread[k] = cfg.lbg_split_epsilon * std::sqrt(global_var[k]);

  FeatureMatrix centroids{global_mean};
  while (centroids.size() < m) {
    FeatureMatrix split;
    split.reserve(centroids.size() * 2);
    for (const auto &c : centroids) {
      std::vector<double> up(c), down(c);
      for (std::size_t k = 0; k < d; ++k) {
        up[k] += spread[k];
        down[k] -= spread[k];
      }
      split.push_back(std::move(up));
      split.push_back(std::move(down));
    }
    centroids = std::move(split);

    for (std::size_t pass = 0; pass < kKmeansMaxPasses; ++pass) {
      Partition part = Assign(data, centroids);
      FillEmptyCells(data, centroids, part);
      FeatureMatrix updated = CellMeans(data, part, centroids.size());
      double movement = 0.0;
      for (std::size_t c = 0; c < centroids.size(); ++c)
        movement = std::max(movement,
                            std::sqrt(SquaredDistance(updated[c], centroids[c])));
      centroids = std::move(updated);
      if (movement < kKmeansTolerance) break;
    }
  }

  Partition part = Assign(data, centroids);
  FillEmptyCells(data, centroids, part);
  const FeatureMatrix means = CellMeans(data, part, m);
  const std::vector<double> floor = VarianceFloor(data, cfg.variance_floor_factor);

  GmmModel model;
  model.means = means;
  model.variances.assign(m, std::vector<double>(d, 0.0));
  model.weights.resize(m);
  for (std::size_t t = 0; t < data.size(); ++t) {
    const std::size_t c = part.label[t];
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = data[t][k] - means[c][k];
      model.variances[c][k] += diff * diff;
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    const double count = static_cast<double>(part.count[c]);
    model.weights[c] = count / static_cast<double>(data.size());
    for (std::size_t k = 0; k < d; ++k)
      model.variances[c][k] = std::max(model.variances[c][k] / count, floor[k]);
  }
  NormalizeWeights(model.weights);
  return model;
}

double ComponentLogDensity(std::span<const double> x, std::size_t component,
                           const GmmModel &model) {
  if (component >= model.num_components())
    throw Error(ErrorCode::kInvalidArgument, "component index out of range");
  if (x.size() != model.dim())
    throw Error(ErrorCode::kInvalidArgument, "feature dimension mismatch");
  const auto &var = model.variances[component];
  double log_det = 0.0;
  for (double v : var) log_det += std::log(v);
  const double d = static_cast<double>(x.size());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det +
                 Mahalanobis(x, model.means[component], var));
}

double LogLikelihood(std::span<const double> x, const GmmModel &model) {
  if (x.size() != model.dim())
    throw Error(ErrorCode::kInvalidArgument, "feature dimension mismatch");
  const std::vector<double> consts = ComponentConstants(model);
  std::vector<double> terms(model.num_components());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = consts[i] - 0.5 * Mahalanobis(x, model.means[i], model.variances[i]);
  return LogSumExp(terms);
}

double TotalLogLikelihood(const FeatureMatrix &features, const GmmModel &model) {
  const std::vector<double> consts = ComponentConstants(model);
  std::vector<double> terms(model.num_components());
  double total = 0.0;
  for (const auto &x : features) {
    if (x.size() != model.dim())
      throw Error(ErrorCode::kInvalidArgument, "feature dimension mismatch");
    for (std::size_t i = 0; i < terms.size(); ++i)
      terms[i] =
          consts[i] - 0.5 * Mahalanobis(x, model.means[i], model.variances[i]);
    total += LogSumExp(terms);
  }
  return total;
}

EmResult EmTrain(const FeatureMatrix &features, const GmmModel &init,
                 const TrainingConfig &cfg) {
  cfg.Validate();
  CheckFeatures(features);
  init.Validate();
  if (features.front().size() != init.dim())
    throw Error(ErrorCode::kInvalidArgument, "feature dimension mismatch");

  const FeatureMatrix data = CanonicalOrder(features);
  const std::size_t n = data.size();
  const std::size_t d = init.dim();
  const std::size_t m = init.num_components();
  std::vector<double> global_mean, global_var;
  GlobalMoments(data, global_mean, global_var);
  const std::vector<double> floor = VarianceFloor(data, cfg.variance_floor_factor);

  EmResult result;
  result.model = init;
  result.data_starved = n < 10 * m;
  GmmModel &model = result.model;

  std::vector<double> resp(n * m);
  std::vector<double> frame_ll(n);
  std::vector<double> terms(m);
  for (std::size_t iter = 0; iter <= cfg.em_iterations; ++iter) {
    // E-step; its total is the likelihood of the current parameters.
    const std::vector<double> consts = ComponentConstants(model);
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t i = 0; i < m; ++i)
        terms[i] = consts[i] -
                   0.5 * Mahalanobis(data[t], model.means[i], model.variances[i]);
      const double lse = LogSumExp(terms);
      frame_ll[t] = lse;
      total += lse;
      for (std::size_t i = 0; i < m; ++i)
        resp[t * m + i] = std::exp(terms[i] - lse);
    }
    if (iter == 0)
      result.initial_log_likelihood = total;
    else
      result.log_likelihoods.push_back(total);
    if (iter == cfg.em_iterations) break;

    // M-step.
    for (std::size_t i = 0; i < m; ++i) {
      double occupancy = 0.0;
      for (std::size_t t = 0; t < n; ++t) occupancy += resp[t * m + i];

      if (occupancy < kCollapseThreshold) {
        const std::size_t worst = static_cast<std::size_t>(
            std::min_element(frame_ll.begin(), frame_ll.end()) -
            frame_ll.begin());
        model.means[i] = data[worst];
        for (std::size_t k = 0; k < d; ++k)
          model.variances[i][k] = std::max(global_var[k], floor[k]);
        model.weights[i] = 1.0 / static_cast<double>(n);
        ++result.collapsed_resets;
        continue;
      }

      std::vector<double> mean(d, 0.0);
      for (std::size_t t = 0; t < n; ++t) {
        const double r = resp[t * m + i];
        for (std::size_t k = 0; k < d; ++k) mean[k] += r * data[t][k];
      }
      for (double &v : mean) v /= occupancy;

      std::vector<double> var(d, 0.0);
      for (std::size_t t = 0; t < n; ++t) {
        const double r = resp[t * m + i];
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = data[t][k] - mean[k];
          var[k] += r * diff * diff;
        }
      }
      for (std::size_t k = 0; k < d; ++k)
        var[k] = std::max(var[k] / occupancy, floor[k]);

      model.weights[i] = occupancy / static_cast<double>(n);
      model.means[i] = std::move(mean);
      model.variances[i] = std::move(var);
    }
    NormalizeWeights(model.weights);
  }
  return result;
}

EmResult TrainGmm(const FeatureMatrix &features, const TrainingConfig &cfg,
                  FeatureKind kind) {
  GmmModel init = LbgInit(features, cfg);
  init.feature_kind = kind;
  return EmTrain(features, init, cfg);
}

namespace {

void PutU32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void PutF64(std::vector<std::uint8_t> &out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b)
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b)
      v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * b);
    return v;
  }

  double F64() {
    Need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b)
      v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * b);
    return std::bit_cast<double>(v);
  }

  std::size_t pos() const { return pos_; }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n)
      throw Error(ErrorCode::kCorruptModel, "model record is truncated");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t Crc32(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

constexpr char kMagic[4] = {'S', 'I', 'D', 'M'};

}  // namespace

std::vector<std::uint8_t> SerializeModel(const GmmModel &model) {
  model.Validate();
  const std::size_t m = model.num_components();
  const std::size_t d = model.dim();
  std::vector<std::uint8_t> out;
  out.reserve(24 + 8 * m * (1 + 2 * d));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  PutU32(out, kModelFormatVersion);
  PutU32(out, static_cast<std::uint32_t>(model.feature_kind));
  PutU32(out, static_cast<std::uint32_t>(d));
  PutU32(out, static_cast<std::uint32_t>(m));
  for (double w : model.weights) PutF64(out, w);
  for (const auto &mu : model.means)
    for (double v : mu) PutF64(out, v);
  for (const auto &var : model.variances)
    for (double v : var) PutF64(out, v);
  PutU32(out, Crc32(out));
  return out;
}

GmmModel DeserializeModel(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 24 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw Error(ErrorCode::kCorruptModel, "missing SIDM magic");
  Reader reader(bytes.subspan(4));
  const std::uint32_t version = reader.U32();
  if (version != kModelFormatVersion)
    throw Error(ErrorCode::kCorruptModel,
                "unsupported model format version " + std::to_string(version));
  const std::uint32_t kind = reader.U32();
  if (kind > static_cast<std::uint32_t>(FeatureKind::kHosmr))
    throw Error(ErrorCode::kCorruptModel, "unknown feature kind tag");
  const std::size_t d = reader.U32();
  const std::size_t m = reader.U32();
  const std::size_t expected = 4 + 16 + 8 * m * (1 + 2 * d) + 4;
  if (m == 0 || d == 0 || bytes.size() != expected)
    throw Error(ErrorCode::kCorruptModel, "model record has the wrong size");

  GmmModel model;
  model.feature_kind = static_cast<FeatureKind>(kind);
  model.weights.resize(m);
  model.means.assign(m, std::vector<double>(d));
  model.variances.assign(m, std::vector<double>(d));
  for (double &w : model.weights) w = reader.F64();
  for (auto &mu : model.means)
    for (double &v : mu) v = reader.F64();
  for (auto &var : model.variances)
    for (double &v : var) v = reader.F64();
  const std::size_t payload = 4 + reader.pos();
  const std::uint32_t stored = reader.U32();
  if (stored != Crc32(bytes.first(payload)))
    throw Error(ErrorCode::kCorruptModel, "checksum mismatch");
  try {
    model.Validate();
  } catch (const Error &err) {
    throw Error(ErrorCode::kCorruptModel, err.what());
  }
  return model;
}

void SaveModel(const GmmModel &model, const std::filesystem::path &path) {
  const std::vector<std::uint8_t> bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

GmmModel LoadModel(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return DeserializeModel(bytes);
}

}  // namespace sidfuse
