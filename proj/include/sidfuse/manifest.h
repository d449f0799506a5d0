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

// Corpus manifest: tab-separated text, one entry per line.
//
//   # comment
//   sample_rate<TAB>8000
//   <speaker><TAB><utterance><TAB><audio path><TAB>train|test
//
// Relative audio paths resolve against the manifest's directory.

#ifndef SIDFUSE_MANIFEST_H_
#define SIDFUSE_MANIFEST_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sidfuse {

enum class Split { kTrain, kTest };

struct ManifestEntry {
  std::string speaker_id;
  std::string utterance_id;
  std::filesystem::path audio_path;
  Split split = Split::kTrain;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  double sample_rate = 8000.0;

  /// Ids must be non-empty and use only [A-Za-z0-9_.-]; utterance ids must
  /// be unique; every test speaker must have training data. Throws
  /// kInvalidArgument.
  void Validate() const;

  std::vector<const ManifestEntry *> Select(Split split) const;
  /// Sorted, unique speakers of the train split.
  std::vector<std::string> TrainSpeakers() const;
};

bool IsValidId(std::string_view id);

/// `base_dir` is used to resolve relative paths.
CorpusManifest ParseManifest(std::string_view text,
                             const std::filesystem::path &base_dir = {});
CorpusManifest LoadManifest(const std::filesystem::path &path);

/// Paths are written as stored in the entries.
std::string ManifestToText(const CorpusManifest &manifest);
void SaveManifest(const CorpusManifest &manifest,
                  const std::filesystem::path &path);

}  // namespace sidfuse

#endif  // SIDFUSE_MANIFEST_H_
