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

#include "sidfuse/manifest.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "sidfuse/error.h"

namespace sidfuse {
namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line = line.substr(tab + 1);
  }
  return fields;
}

}  // namespace

bool IsValidId(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
  });
}

void CorpusManifest::Validate() const {
  if (!(sample_rate > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "manifest sample_rate must be positive");
  std::set<std::string> utterances, train_speakers;
  for (const auto &e : entries) {
    if (!IsValidId(e.speaker_id) || !IsValidId(e.utterance_id))
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid id in entry '" + e.utterance_id + "'");
    if (!utterances.insert(e.utterance_id).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate utterance id '" + e.utterance_id + "'");
    if (e.split == Split::kTrain) train_speakers.insert(e.speaker_id);
  }
  for (const auto &e : entries)
    if (e.split == Split::kTest && !train_speakers.count(e.speaker_id))
      throw Error(ErrorCode::kInvalidArgument,
                  "test speaker '" + e.speaker_id + "' has no training data");
}

std::vector<const ManifestEntry *> CorpusManifest::Select(Split split) const {
  std::vector<const ManifestEntry *> out;
  for (const auto &e : entries)
    if (e.split == split) out.push_back(&e);
  return out;
}

std::vector<std::string> CorpusManifest::TrainSpeakers() const {
  std::set<std::string> speakers;
  for (const auto &e : entries)
    if (e.split == Split::kTrain) speakers.insert(e.speaker_id);
  return {speakers.begin(), speakers.end()};
}

CorpusManifest ParseManifest(std::string_view text,
                             const std::filesystem::path &base_dir) {
  CorpusManifest manifest;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = SplitTabs(line);
    const std::string where = "manifest line " + std::to_string(line_no);
    if (fields.size() == 2 && fields[0] == "sample_rate") {
      const auto [ptr, ec] = std::from_chars(
          fields[1].data(), fields[1].data() + fields[1].size(), manifest.sample_rate);
      if (ec != std::errc() || ptr != fields[1].data() + fields[1].size())
        throw Error(ErrorCode::kParseError, where + ": bad sample_rate");
      continue;
    }
    if (fields.size() != 4)
      throw Error(ErrorCode::kParseError, where + ": expected 4 tab-separated fields");

    ManifestEntry entry;
    entry.speaker_id = fields[0];
    entry.utterance_id = fields[1];
    entry.audio_path = std::filesystem::path(std::string(fields[2]));
    if (entry.audio_path.is_relative() && !base_dir.empty())
      entry.audio_path = base_dir / entry.audio_path;
    if (fields[3] == "train")
      entry.split = Split::kTrain;
    else if (fields[3] == "test")
      entry.split = Split::kTest;
    else
      throw Error(ErrorCode::kParseError,
                  where + ": split must be 'train' or 'test'");
    manifest.entries.push_back(std::move(entry));
  }
  manifest.Validate();
  return manifest;
}

CorpusManifest LoadManifest(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseManifest(buf.str(), path.parent_path());
}

std::string ManifestToText(const CorpusManifest &manifest) {
  std::ostringstream out;
  out << "# speaker\tutterance\taudio\tsplit\n";
  char rate[32];
  const auto [ptr, ec] = std::to_chars(rate, rate + sizeof(rate), manifest.sample_rate);
  out << "sample_rate\t" << std::string_view(rate, static_cast<std::size_t>(ptr - rate))
      << "\n";
  for (const auto &e : manifest.entries)
    out << e.speaker_id << '\t' << e.utterance_id << '\t'
        << e.audio_path.generic_string() << '\t'
        << (e.split == Split::kTrain ? "train" : "test") << '\n';
  return out.str();
}

void SaveManifest(const CorpusManifest &manifest,
                  const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << ManifestToText(manifest);
}

}  // namespace sidfuse
