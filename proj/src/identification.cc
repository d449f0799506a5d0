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

#include "sidfuse/identification.h"

#include <cmath>

#include "sidfuse/error.h"

namespace sidfuse {

void SpeakerModelSet::Add(const std::string &speaker_id, SpeakerModels models) {
  if (speaker_id.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty speaker id");
  models.spectral.Validate();
  models.residual.Validate();
  if (models.residual.feature_kind != FeatureKind::kHosmr)
    throw Error(ErrorCode::kInvalidArgument,
                "residual model for '" + speaker_id + "' is not HOSMR");
  if (models.spectral.feature_kind == FeatureKind::kHosmr)
    throw Error(ErrorCode::kInvalidArgument,
                "spectral model for '" + speaker_id + "' is HOSMR");
  if (!models_.empty()) {
    const SpeakerModels &first = models_.begin()->second;
    if (first.spectral.feature_kind != models.spectral.feature_kind ||
        first.spectral.dim() != models.spectral.dim() ||
        first.residual.dim() != models.residual.dim())
      throw Error(ErrorCode::kInvalidArgument,
                  "speaker '" + speaker_id +
                      "' has models inconsistent with the rest of the set");
  }
  models_[speaker_id] = std::move(models);
}

const SpeakerModels &SpeakerModelSet::at(const std::string &speaker_id) const {
  auto it = models_.find(speaker_id);
  if (it == models_.end())
    throw Error(ErrorCode::kMissingModel, "no models for '" + speaker_id + "'");
  return it->second;
}

UtteranceScores ScoreUtterance(const FeatureMatrix &spectral_features,
                               const FeatureMatrix &residual_features,
                               const SpeakerModelSet &models,
                               const FusionOptions &options) {
  if (!(options.eta >= 0.0 && options.eta <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "eta must lie in [0, 1]");
  if (spectral_features.empty() || residual_features.empty())
    throw Error(ErrorCode::kEmptyFeatureStream,
                "both feature streams must be non-empty");
  if (models.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty speaker model set");

  UtteranceScores scores;
  scores.spectral_frames = spectral_features.size();
  scores.residual_frames = residual_features.size();
  for (const auto &[speaker, pair] : models.models()) {
    StreamScores s;
    s.spectral = TotalLogLikelihood(spectral_features, pair.spectral);
    s.residual = TotalLogLikelihood(residual_features, pair.residual);
    scores.per_speaker.emplace(speaker, s);
  }
  return Refuse(scores, options.eta, options.per_frame_mean);
}

UtteranceScores Refuse(const UtteranceScores &scores, double eta,
                       bool per_frame_mean) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "eta must lie in [0, 1]");
  UtteranceScores out = scores;
  out.eta = eta;
  for (auto &[speaker, s] : out.per_speaker) {
    double spectral = s.spectral;
    double residual = s.residual;
    if (per_frame_mean) {
      spectral /= static_cast<double>(scores.spectral_frames);
      residual /= static_cast<double>(scores.residual_frames);
    }
    s.combined = FuseScores(spectral, residual, eta);
  }
  return out;
}

std::string Identify(const UtteranceScores &scores) {
  if (scores.per_speaker.empty())
    throw Error(ErrorCode::kInvalidArgument, "no speakers were scored");
  auto best = scores.per_speaker.begin();
  for (auto it = std::next(best); it != scores.per_speaker.end(); ++it)
    if (it->second.combined > best->second.combined) best = it;
  return best->first;
}

EvaluationReport Evaluate(const std::vector<Decision> &decisions) {
  if (decisions.empty())
    throw Error(ErrorCode::kInvalidArgument, "no decisions to evaluate");
  EvaluationReport report;
  report.decisions = decisions;
  for (const Decision &d : decisions) {
    if (d.true_speaker == d.decided_speaker) ++report.correct;
    ++report.confusion[d.true_speaker][d.decided_speaker];
  }
  report.pia = 100.0 * static_cast<double>(report.correct) /
               static_cast<double>(decisions.size());
  return report;
}

}  // namespace sidfuse
