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

// Synthetic speakers for desk-scale experiments: a jittered glottal pulse
// train plus aspiration noise driven through a speaker-specific stable
// all-pole vocal-tract filter.

#ifndef SIDFUSE_SYNTHETIC_H_
#define SIDFUSE_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sidfuse/audio_frontend.h"
#include "sidfuse/manifest.h"

namespace sidfuse {

struct SyntheticSpeakerSpec {
  std::string speaker_id;
  std::vector<double> a;      // all-pole filter 1 / (1 + sum a_k z^-k)
  double pitch_period = 80;   // samples
  double jitter = 0.02;       // max relative deviation of each period
  double noise_floor = 0.01;  // aspiration noise std, relative to pulses
};

struct SyntheticOptions {
  double sample_rate = 8000.0;
  double utterance_seconds = 2.0;
  double edge_silence_seconds = 0.1;  // unvoiced lead-in and tail
  double formant_variation = 0.01;    // per-utterance relative pole jitter
  double peak_amplitude = 0.9;
};

/// Deterministic counter-based RNG helpers; identical streams on every
/// standard library.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}
  double Uniform();  // [0, 1)
  double Normal();
  std::uint64_t Bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Mixes several values into one seed (SplitMix64 finaliser).
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

/// Reflection coefficients by step-down recursion. Throws kUnstableFilter if
/// any |k| >= 1, which is equivalent to a pole on or outside the unit circle.
std::vector<double> ReflectionCoefficients(std::span<const double> a);
bool IsStable(std::span<const double> a);

/// Expands conjugate pole pairs (radius, angle) and optional real poles into
/// the coefficients a_1 .. a_p of A(z).
std::vector<double> PolesToCoefficients(std::span<const double> radii,
                                        std::span<const double> angles,
                                        std::span<const double> real_poles);

/// `count` speakers with order-17 filters and pitch periods spread evenly
/// over [pitch_min, pitch_max].
std::vector<SyntheticSpeakerSpec> MakeSyntheticSpeakers(
    std::size_t count, std::uint64_t seed, double pitch_min = 40.0,
    double pitch_max = 100.0);

/// Throws kUnstableFilter or kInvalidArgument (pitch below 20 samples,
/// negative jitter or noise).
void ValidateSpeaker(const SyntheticSpeakerSpec &spec);

struct SyntheticUtterance {
  AudioSignal audio;
  std::vector<std::size_t> pulse_positions;
  std::vector<double> filter;  // coefficients used for this utterance
};

SyntheticUtterance SynthesizeUtterance(const SyntheticSpeakerSpec &spec,
                                       const SyntheticOptions &options,
                                       std::uint64_t seed);

/// Writes audio/<utterance>.wav files and manifest.tsv under out_dir and
/// returns the manifest (with paths relative to out_dir).
CorpusManifest GenerateSyntheticCorpus(
    const std::vector<SyntheticSpeakerSpec> &specs, std::size_t train_utts,
    std::size_t test_utts, const SyntheticOptions &options, std::uint64_t seed,
    const std::filesystem::path &out_dir);

}  // namespace sidfuse

#endif  // SIDFUSE_SYNTHETIC_H_
