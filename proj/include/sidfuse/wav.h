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

// RIFF/WAVE reading and writing, 16-bit PCM mono only.

#ifndef SIDFUSE_WAV_H_
#define SIDFUSE_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sidfuse/audio_frontend.h"

namespace sidfuse {

/// Decodes a PCM16 mono WAVE image; samples are scaled by 1/32768. Throws
/// kUnsupportedFormat for anything else and kSampleRateMismatch when
/// expected_rate is non-zero and differs from the file.
AudioSignal DecodeWav(std::span<const std::uint8_t> bytes,
                      double expected_rate = 0.0);

AudioSignal LoadAudio(const std::filesystem::path &path,
                      double expected_rate = 0.0);

/// Quantizes to PCM16 (round to nearest, clamped) and emits a canonical
/// 44-byte-header WAVE image.
std::vector<std::uint8_t> EncodeWav(const AudioSignal &signal);

void SaveAudio(const AudioSignal &signal, const std::filesystem::path &path);

}  // namespace sidfuse

#endif  // SIDFUSE_WAV_H_
