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

// Batch commands wiring the front end, both feature streams, GMM training
// and fused identification together.

#ifndef SIDFUSE_PIPELINE_H_
#define SIDFUSE_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "sidfuse/config.h"
#include "sidfuse/identification.h"
#include "sidfuse/manifest.h"

namespace sidfuse {

struct UtteranceFeatures {
  FeatureMatrix spectral;
  FeatureMatrix residual;
  std::size_t frames = 0;
  std::size_t skipped_residual_frames = 0;
};

/// Preprocess once, then run both extractors over the same frames.
UtteranceFeatures ExtractFeatures(const AudioSignal &audio,
                                  const ToolkitConfig &cfg);

/// Runs fn(0) .. fn(count - 1) on up to `threads` workers (0: hardware
/// concurrency). The first exception by index is rethrown.
void ParallelFor(std::size_t count, std::size_t threads,
                 const std::function<void(std::size_t)> &fn);

struct ModelTrainingLog {
  std::string speaker_id;
  std::string stream;  // "spectral" or "residual"
  FeatureKind kind = FeatureKind::kMfcc;
  std::size_t num_vectors = 0;
  double initial_log_likelihood = 0.0;
  std::vector<double> log_likelihoods;  // one per EM iteration
  std::size_t collapsed_resets = 0;
  bool data_starved = false;
};

struct TrainOutput {
  SpeakerModelSet models;
  std::vector<ModelTrainingLog> logs;  // sorted by speaker, spectral first
};

/// Trains one spectral and one HOSMR model per training speaker. Errors are
/// re-raised with the speaker and utterance ids prepended.
TrainOutput TrainCommand(const CorpusManifest &manifest, const ToolkitConfig &cfg);

struct UtteranceRecord {
  std::string utterance_id;
  std::string true_speaker;
  UtteranceScores scores;  // combined at the evaluation eta
  std::string decided;           // fused
  std::string decided_spectral;  // eta = 1
  std::string decided_residual;  // eta = 0
};

struct EvaluationRun {
  double eta = 0.5;
  bool per_frame_mean = false;
  std::vector<UtteranceRecord> records;  // manifest order
  EvaluationReport spectral_only;
  EvaluationReport residual_only;
  EvaluationReport fused;
};

/// Scores every test utterance against every speaker. Throws kMissingModel
/// if a test speaker has no model.
EvaluationRun EvaluateCommand(const CorpusManifest &manifest,
                              const SpeakerModelSet &models,
                              const ToolkitConfig &cfg, double eta);

struct IdentifyResult {
  std::string speaker_id;
  UtteranceScores scores;
};

IdentifyResult IdentifyAudio(const AudioSignal &audio,
                             const SpeakerModelSet &models,
                             const ToolkitConfig &cfg, double eta);

/// Human-readable table: PIA summary, per-utterance decisions and
/// per-speaker accuracy.
std::string ReportText(const EvaluationRun &run);

/// One JSON object per line and utterance: ids, decisions and the per-stream
/// and combined scores of the decided and the true speaker.
std::string ReportRecords(const EvaluationRun &run);

}  // namespace sidfuse

#endif  // SIDFUSE_PIPELINE_H_
