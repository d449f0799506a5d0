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

// Closed-set identification with score-level fusion of a spectral stream and
// a residual stream:
//
//   combined = eta * spectral + (1 - eta) * residual
//
// where each stream score is the summed frame log-likelihood under the
// speaker's model for that stream.

#ifndef SIDFUSE_IDENTIFICATION_H_
#define SIDFUSE_IDENTIFICATION_H_

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sidfuse/gmm.h"

namespace sidfuse {

struct SpeakerModels {
  GmmModel spectral;
  GmmModel residual;
};

class SpeakerModelSet {
 public:
  /// Both models must validate; the residual model must be HOSMR and the
  /// spectral model must not.
  void Add(const std::string &speaker_id, SpeakerModels models);

  const SpeakerModels &at(const std::string &speaker_id) const;
  bool contains(const std::string &speaker_id) const {
    return models_.count(speaker_id) != 0;
  }
  std::size_t size() const { return models_.size(); }
  bool empty() const { return models_.empty(); }

  /// Sorted by speaker id.
  const std::map<std::string, SpeakerModels> &models() const { return models_; }

 private:
  std::map<std::string, SpeakerModels> models_;
};

struct StreamScores {
  double spectral = 0.0;
  double residual = 0.0;
  double combined = 0.0;
};

struct UtteranceScores {
  std::map<std::string, StreamScores> per_speaker;
  std::size_t spectral_frames = 0;
  std::size_t residual_frames = 0;
  double eta = 0.5;
};

struct FusionOptions {
  double eta = 0.5;
  // Divide each stream total by its frame count before fusing.
  bool per_frame_mean = false;
};

inline double FuseScores(double spectral, double residual, double eta) {
  return eta * spectral + (1.0 - eta) * residual;
}

/// Throws kEmptyFeatureStream if either stream is empty, kInvalidArgument for
/// eta outside [0, 1] or an empty model set.
UtteranceScores ScoreUtterance(const FeatureMatrix &spectral_features,
                               const FeatureMatrix &residual_features,
                               const SpeakerModelSet &models,
                               const FusionOptions &options = {});

/// Recomputes the combined score of every speaker for a different eta.
UtteranceScores Refuse(const UtteranceScores &scores, double eta,
                       bool per_frame_mean = false);

/// Arg max of the combined score; ties go to the lowest speaker id.
std::string Identify(const UtteranceScores &scores);

struct Decision {
  std::string utterance_id;
  std::string true_speaker;
  std::string decided_speaker;
};

struct EvaluationReport {
  std::vector<Decision> decisions;
  double pia = 0.0;
  std::size_t correct = 0;
  // confusion[true][decided] = count
  std::map<std::string, std::map<std::string, std::size_t>> confusion;
};

/// PIA = 100 * correct / total. Throws kInvalidArgument for an empty list.
EvaluationReport Evaluate(const std::vector<Decision> &decisions);

}  // namespace sidfuse

#endif  // SIDFUSE_IDENTIFICATION_H_
