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

#ifndef SIDFUSE_CONFIG_H_
#define SIDFUSE_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "sidfuse/audio_frontend.h"
#include "sidfuse/gmm.h"
#include "sidfuse/hosmr.h"
#include "sidfuse/identification.h"
#include "sidfuse/spectral_features.h"

namespace sidfuse {

/// Every tunable of the pipeline. The text form is `key = value` lines with
/// '#' comments; unknown keys are rejected.
struct ToolkitConfig {
  double sample_rate = 8000.0;
  PreprocessConfig preprocess;
  HosmrConfig hosmr;
  SpectralConfig spectral;
  TrainingConfig spectral_training;
  TrainingConfig residual_training;
  FusionOptions fusion;
  std::size_t threads = 0;  // 0: hardware concurrency

  /// Propagates sample_rate and the shared EM settings into the nested
  /// structs and validates everything. Throws kInvalidArgument.
  void Finalize();

  /// Applies one `key = value` assignment.
  void Set(std::string_view key, std::string_view value);
};

ToolkitConfig DefaultConfig();

/// Parses the text form on top of the defaults.
ToolkitConfig ParseConfig(std::string_view text);
ToolkitConfig LoadConfig(const std::filesystem::path &path);

/// Canonical text form; ParseConfig(ToText(c)) reproduces c.
std::string ToText(const ToolkitConfig &cfg);

}  // namespace sidfuse

#endif  // SIDFUSE_CONFIG_H_
