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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status if
// any criterion fails. Each check recomputes its reference independently.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include "oracles.h"
#include "sidfuse/audio_frontend.h"
#include "sidfuse/config.h"
#include "sidfuse/error.h"
#include "sidfuse/hosmr.h"
#include "sidfuse/lp_residual.h"
#include "sidfuse/pipeline.h"
#include "sidfuse/synthetic.h"
#include "sidfuse/wav.h"

using namespace sidfuse;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

int failures = 0;

void Report(int id, const char *name, bool ok, const std::string &detail) {
  std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string Fmt(const char *fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

constexpr std::uint64_t kCorpusSeed = 2026;

struct Corpus {
  CorpusManifest manifest;
  std::vector<AudioSignal> audio;  // manifest order
};

Corpus MakeCorpus(const fs::path &dir) {
  fs::remove_all(dir);
  GenerateSyntheticCorpus(MakeSyntheticSpeakers(10, kCorpusSeed), 8, 4, {}, kCorpusSeed, dir);
  Corpus c;
  c.manifest = LoadManifest(dir / "manifest.tsv");
  for (const auto &e : c.manifest.entries) c.audio.push_back(LoadAudio(e.audio_path, 8000.0));
  return c;
}

void LpOracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int f = 0; f < 1000; ++f) {
    const auto frame = oracle::SpeechLikeFrame(rng);
    const auto fast = ComputeLp(frame, 17).a;
    const auto dense = oracle::DenseLp(frame, 17);
    for (std::size_t k = 0; k < 17; ++k) worst = std::max(worst, std::abs(fast[k] - dense[k]));
  }
  const double secs = Seconds(start);
  Report(1, "LP oracle equivalence", worst <= 1e-8 && secs < 10.0,
         Fmt("1000 frames, max |a_LD - a_dense| = %.3e (tol 1e-8), %.2f s (limit 10 s)", worst, secs));
}

void Reconstruction(const Corpus &c, const ToolkitConfig &cfg) {
  double worst = 0.0;
  std::size_t frames = 0, skipped = 0;
  for (const auto &audio : c.audio) {
    const FrameSequence seq = Preprocess(audio, cfg.preprocess);
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
      const auto &s = seq.frames[i];
      LpCoefficients lp;
      try {
        lp = ComputeLp(s, cfg.hosmr.lp_order);
      } catch (const Error &) {
        ++skipped;
        continue;
      }
      const auto e = InverseFilter(s, lp, i).e;
      const auto pred = Predict(s, lp);
      for (std::size_t n = 0; n < s.size(); ++n) worst = std::max(worst, std::abs(s[n] - (pred[n] + e[n])));
      ++frames;
    }
  }
  Report(2, "reconstruction identity", worst <= 1e-12 && frames > 0,
         Fmt("%zu frames (%zu degenerate), max |s - (s_hat + e)| = %.3e (tol 1e-12)", frames, skipped, worst));
}

void Moments() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int f = 0; f < 10000; ++f) {
    std::vector<double> e(160);
    for (double &v : e) v = u(rng);
    const auto fast = CentralMoments(ResidualFrame{e, 0}, 6).moments;
    const auto naive = oracle::NaiveMoments(e, 6);
    for (std::size_t k = 0; k < 6; ++k) worst = std::max(worst, std::abs(fast[k] - naive[k]));
  }
  std::vector<double> alt(160);
  for (std::size_t n = 0; n < alt.size(); ++n) alt[n] = n % 2 == 0 ? 1.0 : -1.0;
  const auto m = CentralMoments(ResidualFrame{alt, 0}, 6).moments;
  const bool exact = m == std::vector<double>{1, 0, 1, 0, 1, 0};
  Report(3, "moments oracle", worst <= 1e-12 && exact,
         Fmt("10000 frames, max deviation %.3e (tol 1e-12); alternating sequence %s", worst,
             exact ? "gives (1,0,1,0,1,0) exactly" : "MISMATCH"));
}

void EmMonotonicity() {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> clusters(1, 12);
  double worst_drop = 0.0;
  std::size_t runs = 0;
  for (int ds = 0; ds < 100; ++ds) {
    const std::size_t d = 2 + ds % 12;
    const std::size_t n = 400;
    const int k = clusters(rng);
    FeatureMatrix centers(k, std::vector<double>(d));
    for (auto &c : centers)
      for (double &v : c) v = 3.0 * g(rng);
    FeatureMatrix data(n, std::vector<double>(d));
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t j = 0; j < d; ++j) data[t][j] = centers[t % k][j] + (0.3 + (t % 3)) * g(rng);
    for (std::size_t m : {2u, 4u, 8u, 16u}) {
      TrainingConfig cfg;
      cfg.num_components = m;
      cfg.em_iterations = 10;
      const EmResult r = TrainGmm(data, cfg, FeatureKind::kMfcc);
      double prev = r.initial_log_likelihood;
      for (double ll : r.log_likelihoods) {
        worst_drop = std::max(worst_drop, prev - ll);
        prev = ll;
      }
      ++runs;
    }
  }

  // Single component: one EM pass gives the sample mean and variance.
  double worst_single = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    FeatureMatrix data(300, std::vector<double>(5));
    for (auto &x : data)
      for (double &v : x) v = 2.0 * g(rng) + trial;
    TrainingConfig cfg;
    cfg.num_components = 1;
    const GmmModel m = TrainGmm(data, cfg, FeatureKind::kMfcc).model;
    for (std::size_t j = 0; j < 5; ++j) {
      long double mean = 0.0L, var = 0.0L;
      for (const auto &x : data) mean += x[j];
      mean /= data.size();
      for (const auto &x : data) var += (x[j] - mean) * (x[j] - mean);
      var /= data.size();
      worst_single = std::max({worst_single, std::abs(m.means[0][j] - static_cast<double>(mean)),
                               std::abs(m.variances[0][j] - static_cast<double>(var))});
    }
  }
  Report(4, "EM monotonicity", worst_drop <= 1e-8 && worst_single <= 1e-9,
         Fmt("%zu runs x 10 iterations, largest decrease %.3e (slack 1e-8); M=1 max error %.3e (tol 1e-9)",
             runs, std::max(worst_drop, 0.0), worst_single));
}

void MixtureDensity() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  double worst = 0.0;
  std::size_t compared = 0;
  for (int model = 0; model < 100; ++model) {
    const std::size_t m = 1 + model % 16, d = 1 + model % 10;
    GmmModel gmm;
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      gmm.weights.push_back(u(rng));
      sum += gmm.weights.back();
      std::vector<double> mean(d), var(d);
      for (std::size_t k = 0; k < d; ++k) {
        mean[k] = 2.0 * g(rng);
        var[k] = u(rng);
      }
      gmm.means.push_back(mean);
      gmm.variances.push_back(var);
    }
    for (double &w : gmm.weights) w /= sum;
    for (int p = 0; p < 100; ++p) {
      std::vector<double> x(d);
      for (double &v : x) v = 3.0 * g(rng);
      double lin = 0.0;
      for (std::size_t i = 0; i < m; ++i) lin += gmm.weights[i] * oracle::NaiveGaussian(x, gmm.means[i], gmm.variances[i]);
      if (!(lin > std::numeric_limits<double>::min())) continue;
      worst = std::max(worst, std::abs(LogLikelihood(x, gmm) - std::log(lin)));
      ++compared;
    }
  }
  Report(5, "mixture-density oracle", worst <= 1e-9 && compared > 9000,
         Fmt("%zu points over 100 models, max |log-domain - linear-domain| = %.3e (tol 1e-9)", compared, worst));
}

void FusionBoundaries(const Corpus &c, const ToolkitConfig &cfg, const SpeakerModelSet &models) {
  std::size_t mismatches = 0, utterances = 0;
  bool exact = true;
  for (std::size_t i = 0; i < c.manifest.entries.size(); ++i) {
    if (c.manifest.entries[i].split != Split::kTest) continue;
    const UtteranceFeatures f = ExtractFeatures(c.audio[i], cfg);
    // Stand-alone single-stream systems.
    std::string best_spec, best_res;
    double top_spec = -INFINITY, top_res = -INFINITY;
    for (const auto &[id, pair] : models.models()) {
      const double s = TotalLogLikelihood(f.spectral, pair.spectral);
      const double r = TotalLogLikelihood(f.residual, pair.residual);
      if (s > top_spec) top_spec = s, best_spec = id;
      if (r > top_res) top_res = r, best_res = id;
    }
    const auto at1 = ScoreUtterance(f.spectral, f.residual, models, {1.0, false});
    const auto at0 = Refuse(at1, 0.0);
    const auto half = Refuse(at1, 0.5);
    mismatches += Identify(at1) != best_spec;
    mismatches += Identify(at0) != best_res;
    for (const auto &[id, s] : half.per_speaker) exact &= s.combined == 0.5 * s.spectral + 0.5 * s.residual;
    for (const auto &[id, s] : at1.per_speaker) exact &= s.combined == s.spectral;
    for (const auto &[id, s] : at0.per_speaker) exact &= s.combined == s.residual;
    ++utterances;
  }
  Report(6, "fusion boundaries", mismatches == 0 && exact,
         Fmt("%zu test utterances, %zu decision mismatches at eta in {0, 1}, combined arithmetic %s", utterances,
             mismatches, exact ? "exact" : "INEXACT"));
}

struct EndToEnd {
  Corpus corpus;
  SpeakerModelSet models;
  std::string report;
  std::string records;
  EvaluationRun run;
  double seconds = 0.0;
};

EndToEnd RunEndToEnd(const fs::path &dir, const ToolkitConfig &cfg) {
  const auto start = Clock::now();
  EndToEnd out;
  out.corpus = MakeCorpus(dir);
  out.models = TrainCommand(out.corpus.manifest, cfg).models;
  out.run = EvaluateCommand(out.corpus.manifest, out.models, cfg, 0.5);
  out.report = ReportText(out.run);
  out.records = ReportRecords(out.run);
  out.seconds = Seconds(start);
  return out;
}

void ConfigSnapshot() {
  const ToolkitConfig c = DefaultConfig();
  bool ok = c.preprocess.pre_emphasis == 0.97 && c.sample_rate == 8000.0 && c.preprocess.frame_len == 160 &&
            c.preprocess.frame_shift == 80 && c.hosmr.lp_order == 17 && c.hosmr.num_moments == 6 &&
            c.spectral.num_cepstra == 19 && c.spectral.num_filters == 20 &&
            c.spectral_training.em_iterations == 10 && c.residual_training.em_iterations == 10 &&
            c.fusion.eta == 0.5 && !c.fusion.per_frame_mean;
  const auto w = HammingWindow(160);
  for (std::size_t n = 0; n < w.size(); ++n)
    ok &= std::abs(w[n] - (0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / 159.0))) <= 1e-15;
  const std::string text = ToText(c);
  for (const char *line : {"pre_emphasis = 0.97", "frame_len = 160", "frame_shift = 80", "lp_order = 17",
                           "num_moments = 6", "num_cepstra = 19", "num_filters = 20", "em_iterations = 10",
                           "eta = 0.5"})
    ok &= text.find(line) != std::string::npos;
  ok &= ToText(ParseConfig(text)) == text;
  Report(9, "default configuration", ok,
         "0.97 pre-emphasis, 160/80 Hamming frames at 8 kHz, LP order 17, 6 moments, 19 cepstra, 20 filters, "
         "10 EM iterations, eta 0.5");
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "sidfuse_acceptance";
  try {
    const ToolkitConfig cfg = DefaultConfig();
    LpOracle();

    const Corpus corpus = MakeCorpus(work / "corpus");
    Reconstruction(corpus, cfg);
    Moments();
    EmMonotonicity();
    MixtureDensity();

    const EndToEnd first = RunEndToEnd(work / "run1", cfg);
    FusionBoundaries(first.corpus, cfg, first.models);
    const double spec = first.run.spectral_only.pia, res = first.run.residual_only.pia,
                 fused = first.run.fused.pia;
    Report(7, "end-to-end synthetic run",
           spec >= 95.0 && res > 10.0 && fused >= spec - 2.5 && first.seconds < 300.0,
           Fmt("spectral-only %.2f%% (>= 95), residual-only %.2f%% (> 10), fused %.2f%% (>= %.2f), %.1f s (< 300)",
               spec, res, fused, spec - 2.5, first.seconds));

    const EndToEnd second = RunEndToEnd(work / "run2", cfg);
    Report(8, "determinism", first.report == second.report && first.records == second.records,
           Fmt("repeated run: report %s, records %s", first.report == second.report ? "identical" : "DIFFERENT",
               first.records == second.records ? "identical" : "DIFFERENT"));
    ConfigSnapshot();
  } catch (const std::exception &e) {
    std::printf("[FAIL] acceptance run aborted: %s\n", e.what());
    ++failures;
  }
  fs::remove_all(work);
  std::printf("%s: %d criterion failure(s)\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
