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

#include "sidfuse/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sidfuse/error.h"
#include "sidfuse/lp_residual.h"
#include "sidfuse/wav.h"

namespace sidfuse {
namespace {

constexpr std::size_t kPolePairs = 8;  // 8 pairs + 1 real pole = order 17

std::vector<double> Multiply(const std::vector<double> &p,
                             const std::vector<double> &q) {
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  return out;
}

struct PoleSet {
  std::vector<double> radii, angles, real;
};

std::vector<double> CoefficientsOf(const PoleSet &poles) {
  return PolesToCoefficients(poles.radii, poles.angles, poles.real);
}

std::string SpeakerName(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spk%02zu", index);
  return buf;
}

}  // namespace

double SynthRng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SynthRng::Normal() {
  // Box-Muller; u1 is kept away from zero.
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(a) ^ b) ^ c);
}

std::vector<double> ReflectionCoefficients(std::span<const double> a) {
  std::vector<double> cur(a.begin(), a.end());
  std::vector<double> k(cur.size());
  for (std::size_t p = cur.size(); p > 0; --p) {
    const double kp = cur[p - 1];
    if (!(std::abs(kp) < 1.0))
      throw Error(ErrorCode::kUnstableFilter,
                  "reflection coefficient " + std::to_string(p) +
                      " has magnitude >= 1");
    k[p - 1] = kp;
    std::vector<double> next(p - 1);
    const double denom = 1.0 - kp * kp;
    for (std::size_t j = 0; j + 1 < p; ++j)
      next[j] = (cur[j] - kp * cur[p - 2 - j]) / denom;
    cur = std::move(next);
  }
  return k;
}

bool IsStable(std::span<const double> a) {
  try {
    ReflectionCoefficients(a);
    return true;
  } catch (const Error &) {
    return false;
  }
}

std::vector<double> PolesToCoefficients(std::span<const double> radii,
                                        std::span<const double> angles,
                                        std::span<const double> real_poles) {
  if (radii.size() != angles.size())
    throw Error(ErrorCode::kInvalidArgument, "radii/angles size mismatch");
  std::vector<double> poly{1.0};
  for (std::size_t i = 0; i < radii.size(); ++i)
    poly = Multiply(poly, {1.0, -2.0 * radii[i] * std::cos(angles[i]),
                           radii[i] * radii[i]});
  for (double rho : real_poles) poly = Multiply(poly, {1.0, -rho});
  return {poly.begin() + 1, poly.end()};
}

void ValidateSpeaker(const SyntheticSpeakerSpec &spec) {
  if (!IsValidId(spec.speaker_id))
    throw Error(ErrorCode::kInvalidArgument, "invalid speaker id");
  if (spec.a.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty filter");
  if (!(spec.pitch_period >= 20.0))
    throw Error(ErrorCode::kInvalidArgument, "pitch period below 20 samples");
  if (!(spec.jitter >= 0.0 && spec.jitter < 0.5) || !(spec.noise_floor >= 0.0))
    throw Error(ErrorCode::kInvalidArgument, "bad jitter or noise floor");
  ReflectionCoefficients(spec.a);
}

namespace {

// Formant-like pole layout: one pair per band of width pi / 8 with a random
// position inside the band, bandwidth-like radii in [0.82, 0.96] and one real
// pole for spectral tilt.
PoleSet DrawPoles(SynthRng &rng) {
  PoleSet poles;
  for (std::size_t j = 0; j < kPolePairs; ++j) {
    const double band = std::numbers::pi / static_cast<double>(kPolePairs);
    poles.angles.push_back(band * (static_cast<double>(j) + 0.2 + 0.6 * rng.Uniform()));
    poles.radii.push_back(0.82 + 0.14 * rng.Uniform());
  }
  poles.real.push_back(0.3 + 0.5 * rng.Uniform());
  return poles;
}

// Recovers the pole layout of a speaker filter from its generator seed.
PoleSet SpeakerPoles(std::uint64_t seed, std::size_t index) {
  SynthRng rng(MixSeed(seed, index, 0x5350));
  return DrawPoles(rng);
}

}  // namespace

std::vector<SyntheticSpeakerSpec> MakeSyntheticSpeakers(std::size_t count,
                                                        std::uint64_t seed,
                                                        double pitch_min,
                                                        double pitch_max) {
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "no speakers requested");
  std::vector<SyntheticSpeakerSpec> specs(count);
  for (std::size_t i = 0; i < count; ++i) {
    SyntheticSpeakerSpec &spec = specs[i];
    spec.speaker_id = SpeakerName(i);
    spec.a = CoefficientsOf(SpeakerPoles(seed, i));
    const double frac =
        count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    spec.pitch_period = std::round(pitch_min + (pitch_max - pitch_min) * frac);
    ValidateSpeaker(spec);
  }
  return specs;
}

SyntheticUtterance SynthesizeUtterance(const SyntheticSpeakerSpec &spec,
                                       const SyntheticOptions &options,
                                       std::uint64_t seed) {
  ValidateSpeaker(spec);
  SynthRng rng(seed);
  const auto total =
      static_cast<std::size_t>(std::lround(options.utterance_seconds * options.sample_rate));
  const auto edge = static_cast<std::size_t>(
      std::lround(options.edge_silence_seconds * options.sample_rate));
  if (total <= 2 * edge)
    throw Error(ErrorCode::kInvalidArgument, "utterance too short for its edges");

  SyntheticUtterance utt;
  // Per-utterance vocal-tract variation: scale every reflection coefficient
  // slightly, which keeps the filter stable.
  utt.filter = spec.a;
  if (options.formant_variation > 0.0) {
    std::vector<double> k = ReflectionCoefficients(spec.a);
    for (double &kj : k) {
      kj *= 1.0 + options.formant_variation * rng.Normal();
      kj = std::clamp(kj, -0.999, 0.999);
    }
    // Step-up recursion back to direct form.
    std::vector<double> a;
    for (double kj : k) {
      std::vector<double> next(a.size() + 1);
      for (std::size_t j = 0; j < a.size(); ++j)
        next[j] = a[j] + kj * a[a.size() - 1 - j];
      next[a.size()] = kj;
      a = std::move(next);
    }
    utt.filter = std::move(a);
  }

  std::vector<double> excitation(total, 0.0);
  const double phase = 2.0 * std::numbers::pi * rng.Uniform();
  double t = static_cast<double>(edge) + spec.pitch_period * rng.Uniform();
  while (true) {
    const auto pos = static_cast<std::size_t>(std::lround(t));
    if (pos >= total - edge) break;
    const double seconds = static_cast<double>(pos) / options.sample_rate;
    // Slow syllable-rate amplitude envelope.
    const double env =
        0.6 + 0.4 * std::sin(2.0 * std::numbers::pi * 3.0 * seconds + phase);
    excitation[pos] += env;
    utt.pulse_positions.push_back(pos);
    t += spec.pitch_period * (1.0 + spec.jitter * (2.0 * rng.Uniform() - 1.0));
  }
  for (double &x : excitation) x += spec.noise_floor * rng.Normal();

  std::vector<double> speech = SynthesizeAllPole(excitation, utt.filter);
  double peak = 0.0;
  for (double s : speech) peak = std::max(peak, std::abs(s));
  if (!(peak > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "synthesized utterance is silent");
  const double gain = options.peak_amplitude / peak;
  for (double &s : speech) s *= gain;

  utt.audio.sample_rate = options.sample_rate;
  utt.audio.samples = std::move(speech);
  return utt;
}

CorpusManifest GenerateSyntheticCorpus(
    const std::vector<SyntheticSpeakerSpec> &specs, std::size_t train_utts,
    std::size_t test_utts, const SyntheticOptions &options, std::uint64_t seed,
    const std::filesystem::path &out_dir) {
  if (specs.empty()) throw Error(ErrorCode::kInvalidArgument, "no speakers");
  for (const auto &spec : specs) ValidateSpeaker(spec);

  const std::filesystem::path audio_dir = out_dir / "audio";
  std::filesystem::create_directories(audio_dir);

  CorpusManifest manifest;
  manifest.sample_rate = options.sample_rate;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (std::size_t u = 0; u < train_utts + test_utts; ++u) {
      const bool train = u < train_utts;
      const std::size_t local = train ? u : u - train_utts;
      char suffix[32];
      std::snprintf(suffix, sizeof(suffix), train ? "_tr%02zu" : "_te%02zu", local);
      ManifestEntry entry;
      entry.speaker_id = specs[s].speaker_id;
      entry.utterance_id = specs[s].speaker_id + suffix;
      entry.audio_path = std::filesystem::path("audio") / (entry.utterance_id + ".wav");
      entry.split = train ? Split::kTrain : Split::kTest;

      const SyntheticUtterance utt =
          SynthesizeUtterance(specs[s], options, MixSeed(seed, s + 1, u + 1));
      SaveAudio(utt.audio, out_dir / entry.audio_path);
      manifest.entries.push_back(std::move(entry));
    }
  }
  manifest.Validate();
  SaveManifest(manifest, out_dir / "manifest.tsv");
  return manifest;
}

}  // namespace sidfuse
