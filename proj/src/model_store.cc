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

#include "sidfuse/model_store.h"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "sidfuse/error.h"
#include "sidfuse/manifest.h"

namespace sidfuse {
namespace {

constexpr const char *kIndexName = "index.tsv";
constexpr const char *kConfigName = "config.cfg";

}  // namespace

void SaveModelStore(const SpeakerModelSet &models, const ToolkitConfig &config,
                    const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream index;
  index << "# speaker\tstream\tkind\tfile\n";
  for (const auto &[speaker, pair] : models.models()) {
    if (!IsValidId(speaker))
      throw Error(ErrorCode::kInvalidArgument, "invalid speaker id '" + speaker + "'");
    const std::pair<const char *, const GmmModel *> streams[] = {
        {"spectral", &pair.spectral}, {"residual", &pair.residual}};
    for (const auto &[stream, model] : streams) {
      const std::string file = speaker + "." + stream + ".sidm";
      SaveModel(*model, dir / file);
      index << speaker << '\t' << stream << '\t' << FeatureKindName(model->feature_kind)
            << '\t' << file << '\n';
    }
  }
  std::ofstream idx(dir / kIndexName, std::ios::trunc);
  std::ofstream cfg(dir / kConfigName, std::ios::trunc);
  if (!idx || !cfg) throw Error(ErrorCode::kIoError, "cannot write store " + dir.string());
  idx << index.str();
  cfg << ToText(config);
}

ModelStore LoadModelStore(const std::filesystem::path &dir) {
  std::ifstream idx(dir / kIndexName);
  if (!idx) throw Error(ErrorCode::kIoError, "no model index in " + dir.string());

  ModelStore store;
  store.config = LoadConfig(dir / kConfigName);

  std::map<std::string, std::pair<std::optional<GmmModel>, std::optional<GmmModel>>> found;
  std::string line;
  while (std::getline(idx, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string speaker, stream, kind, file;
    if (!std::getline(fields, speaker, '\t') || !std::getline(fields, stream, '\t') ||
        !std::getline(fields, kind, '\t') || !std::getline(fields, file))
      throw Error(ErrorCode::kCorruptModel, "malformed index line: " + line);
    GmmModel model;
    try {
      model = LoadModel(dir / file);
    } catch (const Error &err) {
      throw Error(err.code() == ErrorCode::kIoError ? ErrorCode::kMissingModel
                                                    : err.code(),
                  file + ": " + err.what());
    }
    if (FeatureKindName(model.feature_kind) != kind)
      throw Error(ErrorCode::kCorruptModel, file + ": feature kind disagrees with index");
    if (stream == "spectral")
      found[speaker].first = std::move(model);
    else if (stream == "residual")
      found[speaker].second = std::move(model);
    else
      throw Error(ErrorCode::kCorruptModel, "unknown stream '" + stream + "'");
  }
  for (auto &[speaker, pair] : found) {
    if (!pair.first || !pair.second)
      throw Error(ErrorCode::kMissingModel,
                  "speaker '" + speaker + "' lacks one of its stream models");
    store.models.Add(speaker, {std::move(*pair.first), std::move(*pair.second)});
  }
  if (store.models.empty())
    throw Error(ErrorCode::kMissingModel, "model store is empty");
  return store;
}

}  // namespace sidfuse
