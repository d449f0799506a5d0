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

// Speech front end shared by every feature stream: energy-based silence
// removal, pre-emphasis, framing and Hamming windowing.

#ifndef SIDFUSE_AUDIO_FRONTEND_H_
#define SIDFUSE_AUDIO_FRONTEND_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sidfuse {

/// Mono speech samples in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  double sample_rate = 8000.0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

struct PreprocessConfig {
  double pre_emphasis = 0.97;
  std::size_t frame_len = 160;   // 20 ms at 8 kHz
  std::size_t frame_shift = 80;  // 50% overlap
  double silence_energy_ratio = 0.06;

  /// Throws kInvalidArgument when the fields violate their ranges.
  void Validate() const;
};

struct FrameSequence {
  std::vector<std::vector<double>> frames;
  std::size_t frame_len = 0;
  std::string source_meta;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
};

/// Throws kInvalidArgument if any sample is non-finite or outside [-1, 1],
/// or if the sample rate is not positive.
void ValidateSignal(const AudioSignal &signal);

/// Drops non-overlapping frame_len blocks whose mean-square energy is at or
/// below silence_energy_ratio times the mean block energy of the utterance.
/// A trailing partial block is treated as a block of its own.
AudioSignal RemoveSilence(const AudioSignal &signal,
                          const PreprocessConfig &cfg);

/// y(0) = x(0); y(n) = x(n) - coeff * x(n - 1).
AudioSignal PreEmphasize(const AudioSignal &signal, double coeff);

/// Hamming window w(n) = 0.54 - 0.46 cos(2 pi n / (N - 1)).
std::vector<double> HammingWindow(std::size_t length);

/// Frames start every frame_shift samples; a trailing partial frame is
/// dropped. Every frame is multiplied by the Hamming window.
FrameSequence FrameAndWindow(const AudioSignal &signal,
                             const PreprocessConfig &cfg);

/// Number of complete frames a signal of `length` samples yields.
std::size_t NumFrames(std::size_t length, const PreprocessConfig &cfg);

/// Full front end: RemoveSilence -> PreEmphasize -> FrameAndWindow.
FrameSequence Preprocess(const AudioSignal &signal,
                         const PreprocessConfig &cfg,
                         std::string source_meta = {});

}  // namespace sidfuse

#endif  // SIDFUSE_AUDIO_FRONTEND_H_
