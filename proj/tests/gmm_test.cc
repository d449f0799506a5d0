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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "oracles.h"
#include "sidfuse/error.h"

using namespace sidfuse;

namespace {

FeatureMatrix GaussianCloud(std::mt19937_64 &rng, std::size_t n, const std::vector<double> &mean,
                            double sd) {
  std::normal_distribution<double> g(0.0, sd);
  FeatureMatrix out(n, mean);
  for (auto &x : out)
    for (double &v : x) v += g(rng);
  return out;
}

FeatureMatrix RandomMixtureData(std::mt19937_64 &rng, std::size_t n, std::size_t d, std::size_t clusters) {
  std::normal_distribution<double> g(0.0, 1.0);
  FeatureMatrix centers(clusters, std::vector<double>(d));
  for (auto &c : centers)
    for (double &v : c) v = 4.0 * g(rng);
  FeatureMatrix out(n, std::vector<double>(d));
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t k = 0; k < d; ++k) out[t][k] = centers[t % clusters][k] + g(rng);
  return out;
}

TrainingConfig Config(std::size_t m, std::size_t iters = 10) {
  TrainingConfig cfg;
  cfg.num_components = m;
  cfg.em_iterations = iters;
  return cfg;
}

}  // namespace

TEST_CASE("single component LBG equals the sample moments") {
  std::mt19937_64 rng(1);
  const auto data = RandomMixtureData(rng, 400, 3, 2);
  const GmmModel m = LbgInit(data, Config(1));
  REQUIRE(m.num_components() == 1);
  CHECK(m.weights[0] == 1.0);
  for (std::size_t k = 0; k < 3; ++k) {
    double mean = 0.0;
    for (const auto &x : data) mean += x[k];
    mean /= data.size();
    double var = 0.0;
    for (const auto &x : data) var += (x[k] - mean) * (x[k] - mean);
    var /= data.size();
    CHECK(m.means[0][k] == doctest::Approx(mean).epsilon(1e-12));
    CHECK(m.variances[0][k] == doctest::Approx(var).epsilon(1e-12));
  }
}

TEST_CASE("LBG separates two clouds") {
  std::mt19937_64 rng(2);
  auto data = GaussianCloud(rng, 300, {-5.0, 0.0}, 1.0);
  const auto right = GaussianCloud(rng, 300, {5.0, 1.0}, 1.0);
  data.insert(data.end(), right.begin(), right.end());
  const GmmModel m = LbgInit(data, Config(2));
  std::vector<double> xs{m.means[0][0], m.means[1][0]};
  std::sort(xs.begin(), xs.end());
  CHECK(std::abs(xs[0] + 5.0) < 0.15);
  CHECK(std::abs(xs[1] - 5.0) < 0.15);
  for (double w : m.weights) CHECK(w >= 1.0 / 8.0);
}

TEST_CASE("LBG rejects bad requests") {
  std::mt19937_64 rng(3);
  const auto data = RandomMixtureData(rng, 6, 2, 2);
  CHECK_THROWS_AS(LbgInit(data, Config(8)), Error);
  CHECK_THROWS_AS(LbgInit(data, Config(3)), Error);
  CHECK_THROWS_AS(LbgInit({}, Config(1)), Error);
  try {
    LbgInit(data, Config(8));
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kInsufficientData);
  }
}

TEST_CASE("LBG keeps every cell populated on clumped data") {
  // Many duplicates force empty cells during splitting.
  FeatureMatrix data(50, std::vector<double>{0.0, 0.0});
  for (int i = 0; i < 10; ++i) data.push_back({static_cast<double>(i + 1), -1.0 * i});
  const GmmModel m = LbgInit(data, Config(8));
  for (double w : m.weights) CHECK(w > 0.0);
  CHECK_NOTHROW(m.Validate());
}

TEST_CASE("component log density reference values") {
  GmmModel m;
  m.weights = {1.0};
  m.means = {{0.0}};
  m.variances = {{1.0}};
  const std::vector<double> zero{0.0}, one{1.0};
  CHECK(ComponentLogDensity(zero, 0, m) == doctest::Approx(-0.918938533).epsilon(1e-9));
  CHECK(ComponentLogDensity(one, 0, m) == doctest::Approx(-1.418938533).epsilon(1e-9));

  GmmModel m2;
  m2.weights = {1.0};
  m2.means = {{0.0, 0.0}};
  m2.variances = {{1.0, 1.0}};
  CHECK(ComponentLogDensity(std::vector<double>{0.0, 0.0}, 0, m2) == doctest::Approx(-1.837877066).epsilon(1e-9));
  CHECK_THROWS_AS(ComponentLogDensity(zero, 0, m2), Error);
  CHECK_THROWS_AS(ComponentLogDensity(zero, 1, m), Error);
}

TEST_CASE("component log density matches the direct formula") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 7;
    GmmModel m;
    m.weights = {1.0};
    m.means.assign(1, std::vector<double>(d));
    m.variances.assign(1, std::vector<double>(d));
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) {
      m.means[0][k] = g(rng);
      m.variances[0][k] = u(rng);
      x[k] = g(rng);
    }
    const double direct = std::log(oracle::NaiveGaussian(x, m.means[0], m.variances[0]));
    CHECK(std::abs(ComponentLogDensity(x, 0, m) - direct) <= 1e-10);
  }
}

TEST_CASE("mixture log likelihood") {
  GmmModel same;
  same.weights = {0.5, 0.5};
  same.means = {{0.0}, {0.0}};
  same.variances = {{1.0}, {1.0}};
  const std::vector<double> zero{0.0};
  CHECK(LogLikelihood(zero, same) == doctest::Approx(-0.918938533).epsilon(1e-9));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::normal_distribution<double> g(0.0, 1.0);
  GmmModel m;
  const std::size_t d = 4;
  for (int i = 0; i < 8; ++i) {
    m.weights.push_back(u(rng));
    std::vector<double> mean(d), var(d);
    for (std::size_t k = 0; k < d; ++k) {
      mean[k] = 2.0 * g(rng);
      var[k] = u(rng);
    }
    m.means.push_back(mean);
    m.variances.push_back(var);
  }
  double sum = 0.0;
  for (double w : m.weights) sum += w;
  for (double &w : m.weights) w /= sum;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(d);
    for (double &v : x) v = 2.0 * g(rng);
    double lin = 0.0;
    for (int i = 0; i < 8; ++i) lin += m.weights[i] * oracle::NaiveGaussian(x, m.means[i], m.variances[i]);
    CHECK(std::abs(LogLikelihood(x, m) - std::log(lin)) <= 1e-9);
  }
}

TEST_CASE("log likelihood stays finite far from every component") {
  GmmModel m;
  m.weights = {0.5, 0.5};
  m.means = {{0.0}, {1.0}};
  m.variances = {{1e-4}, {1e-4}};
  const double ll = LogLikelihood(std::vector<double>{1000.0}, m);
  CHECK(std::isfinite(ll));
  const double expected = ComponentLogDensity(std::vector<double>{1000.0}, 1, m) + std::log(0.5);
  CHECK(ll == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("single component EM is exact after one iteration") {
  std::mt19937_64 rng(6);
  const auto data = RandomMixtureData(rng, 500, 3, 3);
  GmmModel init;
  init.weights = {1.0};
  init.means = {{10.0, -10.0, 3.0}};
  init.variances = {{0.1, 7.0, 2.0}};
  const EmResult r = EmTrain(data, init, Config(1, 1));
  for (std::size_t k = 0; k < 3; ++k) {
    double mean = 0.0;
    for (const auto &x : data) mean += x[k];
    mean /= data.size();
    double var = 0.0;
    for (const auto &x : data) var += (x[k] - mean) * (x[k] - mean);
    var /= data.size();
    CHECK(std::abs(r.model.means[0][k] - mean) <= 1e-9 * (1.0 + std::abs(mean)));
    CHECK(std::abs(r.model.variances[0][k] - var) <= 1e-9 * var);
  }
}

TEST_CASE("EM log likelihood never decreases") {
  std::mt19937_64 rng(7);
  for (std::size_t m : {2u, 4u, 8u, 16u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto data = RandomMixtureData(rng, 600, 5, 3 + trial);
      const EmResult r = TrainGmm(data, Config(m, 15), FeatureKind::kMfcc);
      REQUIRE(r.log_likelihoods.size() == 15);
      double prev = r.initial_log_likelihood;
      for (double ll : r.log_likelihoods) {
        CHECK(ll >= prev - 1e-8 * std::abs(prev));
        prev = ll;
      }
      CHECK(r.log_likelihoods.back() == doctest::Approx(TotalLogLikelihood(data, r.model)).epsilon(1e-12));
    }
  }
}

TEST_CASE("EM recovers a well separated two component mixture") {
  std::mt19937_64 rng(8);
  auto data = GaussianCloud(rng, 3000, {-3.0, 2.0}, 1.0);
  const auto other = GaussianCloud(rng, 2000, {3.0, -1.0}, 0.5);
  data.insert(data.end(), other.begin(), other.end());
  const EmResult r = TrainGmm(data, Config(2, 30), FeatureKind::kMfcc);
  const GmmModel &m = r.model;
  const std::size_t a = m.means[0][0] < m.means[1][0] ? 0 : 1;
  const std::size_t b = 1 - a;
  CHECK(std::abs(m.weights[a] - 0.6) < 0.02);
  CHECK(std::abs(m.means[a][0] + 3.0) < 0.15);
  CHECK(std::abs(m.means[a][1] - 2.0) < 0.15);
  CHECK(std::abs(m.means[b][0] - 3.0) < 0.15);
  CHECK(std::abs(m.means[b][1] + 1.0) < 0.15);
  CHECK(std::abs(m.variances[a][0] - 1.0) < 0.15);
  CHECK(std::abs(m.variances[b][0] - 0.25) < 0.15);
}

TEST_CASE("trained models keep normalised weights and floored variances") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto data = RandomMixtureData(rng, 200, 4, 2);
    // A nearly constant dimension exercises the floor.
    for (auto &x : data) x[3] = 1.0 + 1e-9 * (&x - &data[0]);
    const TrainingConfig cfg = Config(8);
    const EmResult r = TrainGmm(data, cfg, FeatureKind::kLpcc);
    const auto floor = VarianceFloor(CanonicalOrder(data), cfg.variance_floor_factor);
    double sum = 0.0;
    for (double w : r.model.weights) {
      CHECK(w >= 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    for (const auto &v : r.model.variances)
      for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] >= floor[k]);
    CHECK(r.model.feature_kind == FeatureKind::kLpcc);
    CHECK_NOTHROW(r.model.Validate());
  }
}

TEST_CASE("collapsed component is re-seeded") {
  std::mt19937_64 rng(10);
  const auto data = GaussianCloud(rng, 200, {0.0, 0.0}, 1.0);
  GmmModel init;
  init.weights = {0.5, 0.5};
  init.means = {{0.0, 0.0}, {1e4, 1e4}};
  init.variances = {{1.0, 1.0}, {1e-3, 1e-3}};
  const EmResult r = EmTrain(data, init, Config(2, 3));
  CHECK(r.collapsed_resets >= 1);
  CHECK_NOTHROW(r.model.Validate());
  for (double w : r.model.weights) CHECK(w > 0.0);
  CHECK(r.data_starved == false);
  const EmResult starved = EmTrain(FeatureMatrix(data.begin(), data.begin() + 15), init, Config(2, 1));
  CHECK(starved.data_starved);
}

TEST_CASE("training is invariant to the order of the data") {
  std::mt19937_64 rng(11);
  auto data = RandomMixtureData(rng, 300, 3, 4);
  const EmResult a = TrainGmm(data, Config(4), FeatureKind::kMfcc);
  std::shuffle(data.begin(), data.end(), rng);
  const EmResult b = TrainGmm(data, Config(4), FeatureKind::kMfcc);
  CHECK(a.model == b.model);
  CHECK(a.log_likelihoods == b.log_likelihoods);
}

TEST_CASE("model serialisation round trip and corruption") {
  std::mt19937_64 rng(12);
  const auto data = RandomMixtureData(rng, 300, 6, 3);
  const GmmModel m = TrainGmm(data, Config(4), FeatureKind::kHosmr).model;
  const auto bytes = SerializeModel(m);
  CHECK(bytes.size() == 4 + 16 + 8 * (4 + 2 * 4 * 6) + 4);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "SIDM");
  CHECK(DeserializeModel(bytes) == m);

  auto expect_corrupt = [](std::span<const std::uint8_t> b) {
    try {
      DeserializeModel(b);
      return false;
    } catch (const Error &e) {
      return e.code() == ErrorCode::kCorruptModel;
    }
  };
  CHECK(expect_corrupt(std::span(bytes).first(bytes.size() - 1)));
  CHECK(expect_corrupt(std::span(bytes).first(10)));
  for (std::size_t pos : {std::size_t{0}, std::size_t{5}, std::size_t{30}, bytes.size() - 1}) {
    auto flipped = bytes;
    flipped[pos] ^= 0x10;
    CHECK(expect_corrupt(flipped));
  }

  const auto path = std::filesystem::temp_directory_path() / "sidfuse_gmm_test.sidm";
  SaveModel(m, path);
  CHECK(LoadModel(path) == m);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(LoadModel(path), Error);
}
