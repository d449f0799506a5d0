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

#include "sidfuse/audio_frontend.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sidfuse/error.h"

namespace sidfuse {

void PreprocessConfig::Validate() const {
  if (!(pre_emphasis >= 0.0 && pre_emphasis < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "pre_emphasis must be in [0, 1)");
  if (frame_len == 0 || frame_shift == 0 || frame_shift > frame_len)
    throw Error(ErrorCode::kInvalidArgument,
                "need 0 < frame_shift <= frame_len");
  if (!(silence_energy_ratio >= 0.0) || !std::isfinite(silence_energy_ratio))
    throw Error(ErrorCode::kInvalidArgument,
                "silence_energy_ratio must be finite and non-negative");
}

void ValidateSignal(const AudioSignal &signal) {
  if (!(signal.sample_rate > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "sample_rate must be positive");
  for (double s : signal.samples) {
    if (!std::isfinite(s) || std::abs(s) > 1.0)
      throw Error(ErrorCode::kInvalidArgument,
                  "samples must be finite and within [-1, 1]");
  }
}

AudioSignal RemoveSilence(const AudioSignal &signal,
                          const PreprocessConfig &cfg) {
  cfg.Validate();
  if (signal.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty signal");

  const std::size_t block = cfg.frame_len;
  const std::size_t num_blocks = (signal.size() + block - 1) / block;
  std::vector<double> energy(num_blocks, 0.0);
  double total = 0.0;
  for (std::size_t b = 0; b < num_blocks; ++b) {
    const std::size_t begin = b * block;
    const std::size_t end = std::min(begin + block, signal.size());
    double acc = 0.0;
    for (std::size_t n = begin; n < end; ++n)
      acc += signal.samples[n] * signal.samples[n];
    energy[b] = acc / static_cast<double>(end - begin);
    total += energy[b];
  }
  const double threshold =
      cfg.silence_energy_ratio * total / static_cast<double>(num_blocks);

  AudioSignal out;
  out.sample_rate = signal.sample_rate;
  out.samples.reserve(signal.size());
  for (std::size_t b = 0; b < num_blocks; ++b) {
    if (!(energy[b] > threshold)) continue;
    const std::size_t begin = b * block;
    const std::size_t end = std::min(begin + block, signal.size());
    out.samples.insert(out.samples.end(), signal.samples.begin() + begin,
                       signal.samples.begin() + end);
  }
  if (out.empty())
    throw Error(ErrorCode::kEmptyAfterVad,
                "every block is below the energy threshold");
  return out;
}

AudioSignal PreEmphasize(const AudioSignal &signal, double coeff) {
  AudioSignal out;
  out.sample_rate = signal.sample_rate;
  out.samples.resize(signal.size());
  if (signal.empty()) return out;
  out.samples[0] = signal.samples[0];
  for (std::size_t n = 1; n < signal.size(); ++n)
    out.samples[n] = signal.samples[n] - coeff * signal.samples[n - 1];
  return out;
}

std::vector<double> HammingWindow(std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (length < 2) return w;
  const double denom = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n)
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi *
                                  static_cast<double>(n) / denom);
  // Pin the symmetric pairs so w(n) == w(N-1-n) bit for bit.
  for (std::size_t n = 0; n < length / 2; ++n) w[length - 1 - n] = w[n];
  return w;
}

std::size_t NumFrames(std::size_t length, const PreprocessConfig &cfg) {
  if (length < cfg.frame_len) return 0;
  return (length - cfg.frame_len) / cfg.frame_shift + 1;
}

FrameSequence FrameAndWindow(const AudioSignal &signal,
                             const PreprocessConfig &cfg) {
  cfg.Validate();
  if (signal.size() < cfg.frame_len)
    throw Error(ErrorCode::kSignalTooShort,
                "signal has " + std::to_string(signal.size()) +
                    " samples, need at least " + std::to_string(cfg.frame_len));
  const std::vector<double> window = HammingWindow(cfg.frame_len);
  const std::size_t count = NumFrames(signal.size(), cfg);

  FrameSequence seq;
  seq.frame_len = cfg.frame_len;
  seq.frames.resize(count);
  for (std::size_t f = 0; f < count; ++f) {
    const double *src = signal.samples.data() + f * cfg.frame_shift;
    auto &frame = seq.frames[f];
    frame.resize(cfg.frame_len);
    for (std::size_t n = 0; n < cfg.frame_len; ++n)
      frame[n] = src[n] * window[n];
  }
  return seq;
}

FrameSequence Preprocess(const AudioSignal &signal,
                         const PreprocessConfig &cfg,
                         std::string source_meta) {
  ValidateSignal(signal);
  AudioSignal voiced = RemoveSilence(signal, cfg);
  AudioSignal emphasized = PreEmphasize(voiced, cfg.pre_emphasis);
  FrameSequence seq = FrameAndWindow(emphasized, cfg);
  seq.source_meta = std::move(source_meta);
  return seq;
}

}  // namespace sidfuse
