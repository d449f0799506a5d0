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

// On-disk model store: one SIDM record per (speaker, stream), an index and
// the configuration the models were trained with.
//
//   <dir>/index.tsv             speaker, stream, feature kind, file name
//   <dir>/config.cfg            ToText() of the training configuration
//   <dir>/<speaker>.<stream>.sidm

#ifndef SIDFUSE_MODEL_STORE_H_
#define SIDFUSE_MODEL_STORE_H_

#include <filesystem>

#include "sidfuse/config.h"
#include "sidfuse/identification.h"

namespace sidfuse {

struct ModelStore {
  SpeakerModelSet models;
  ToolkitConfig config;
};

void SaveModelStore(const SpeakerModelSet &models, const ToolkitConfig &config,
                    const std::filesystem::path &dir);

/// Throws kIoError for a missing index, kCorruptModel for a damaged record
/// and kMissingModel when a speaker lacks one of its two streams.
ModelStore LoadModelStore(const std::filesystem::path &dir);

}  // namespace sidfuse

#endif  // SIDFUSE_MODEL_STORE_H_
