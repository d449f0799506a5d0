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

#include "sidfuse/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sidfuse/audio_frontend.h"
#include "sidfuse/error.h"
#include "sidfuse/hosmr.h"
#include "sidfuse/spectral_features.h"
#include "sidfuse/wav.h"

namespace sidfuse {
namespace {

Error Tagged(const Error &err, const std::string &context) {
  return Error(err.code(), context + ": " + err.what());
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

UtteranceFeatures ExtractFeatures(const AudioSignal &audio,
                                  const ToolkitConfig &cfg) {
  if (audio.sample_rate != cfg.sample_rate)
    throw Error(ErrorCode::kSampleRateMismatch,
                "audio is " + Fixed(audio.sample_rate, 0) + " Hz, config expects " +
                    Fixed(cfg.sample_rate, 0));
  const FrameSequence frames = Preprocess(audio, cfg.preprocess);
  UtteranceFeatures out;
  out.frames = frames.size();
  out.spectral = SpectralExtractor(cfg.spectral).ComputeAll(frames);
  HosmrExtraction hosmr = ExtractHosmr(frames, cfg.hosmr);
  out.skipped_residual_frames = hosmr.skipped_frames;
  out.residual.reserve(hosmr.vectors.size());
  for (auto &v : hosmr.vectors) out.residual.push_back(std::move(v.moments));
  return out;
}

void ParallelFor(std::size_t count, std::size_t threads,
                 const std::function<void(std::size_t)> &fn) {
  if (count == 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);

  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto &err : errors)
    if (err) std::rethrow_exception(err);
}

TrainOutput TrainCommand(const CorpusManifest &manifest, const ToolkitConfig &cfg) {
  manifest.Validate();
  const std::vector<std::string> speakers = manifest.TrainSpeakers();
  if (speakers.empty())
    throw Error(ErrorCode::kInvalidArgument, "manifest has no training entries");

  std::map<std::string, std::vector<const ManifestEntry *>> by_speaker;
  for (const ManifestEntry *e : manifest.Select(Split::kTrain))
    by_speaker[e->speaker_id].push_back(e);

  struct Job {
    SpeakerModels models;
    ModelTrainingLog spectral_log, residual_log;
  };
  std::vector<Job> jobs(speakers.size());

  ParallelFor(speakers.size(), cfg.threads, [&](std::size_t s) {
    const std::string &speaker = speakers[s];
    FeatureMatrix spectral, residual;
    for (const ManifestEntry *e : by_speaker[speaker]) {
      try {
        const AudioSignal audio = LoadAudio(e->audio_path, manifest.sample_rate);
        UtteranceFeatures feats = ExtractFeatures(audio, cfg);
        std::move(feats.spectral.begin(), feats.spectral.end(),
                  std::back_inserter(spectral));
        std::move(feats.residual.begin(), feats.residual.end(),
                  std::back_inserter(residual));
      } catch (const Error &err) {
        throw Tagged(err, "speaker " + speaker + " utterance " + e->utterance_id);
      }
    }

    auto train = [&](const FeatureMatrix &data, const TrainingConfig &tc,
                     FeatureKind kind, const char *stream, GmmModel &model,
                     ModelTrainingLog &log) {
      EmResult result;
      try {
        result = TrainGmm(data, tc, kind);
      } catch (const Error &err) {
        throw Tagged(err, "speaker " + speaker + " " + stream + " model");
      }
      model = std::move(result.model);
      log.speaker_id = speaker;
      log.stream = stream;
      log.kind = kind;
      log.num_vectors = data.size();
      log.initial_log_likelihood = result.initial_log_likelihood;
      log.log_likelihoods = std::move(result.log_likelihoods);
      log.collapsed_resets = result.collapsed_resets;
      log.data_starved = result.data_starved;
    };
    Job &job = jobs[s];
    train(spectral, cfg.spectral_training, cfg.spectral.kind, "spectral",
          job.models.spectral, job.spectral_log);
    train(residual, cfg.residual_training, FeatureKind::kHosmr, "residual",
          job.models.residual, job.residual_log);
  });

  TrainOutput out;
  for (std::size_t s = 0; s < speakers.size(); ++s) {
    out.models.Add(speakers[s], std::move(jobs[s].models));
    out.logs.push_back(std::move(jobs[s].spectral_log));
    out.logs.push_back(std::move(jobs[s].residual_log));
  }
  return out;
}

EvaluationRun EvaluateCommand(const CorpusManifest &manifest,
                              const SpeakerModelSet &models,
                              const ToolkitConfig &cfg, double eta) {
  manifest.Validate();
  const std::vector<const ManifestEntry *> tests = manifest.Select(Split::kTest);
  if (tests.empty()) throw Error(ErrorCode::kInvalidArgument, "no test utterances");
  for (const ManifestEntry *e : tests)
    if (!models.contains(e->speaker_id))
      throw Error(ErrorCode::kMissingModel,
                  "no model for test speaker '" + e->speaker_id + "'");

  EvaluationRun run;
  run.eta = eta;
  run.per_frame_mean = cfg.fusion.per_frame_mean;
  run.records.resize(tests.size());
  ParallelFor(tests.size(), cfg.threads, [&](std::size_t i) {
    const ManifestEntry &e = *tests[i];
    UtteranceRecord &rec = run.records[i];
    rec.utterance_id = e.utterance_id;
    rec.true_speaker = e.speaker_id;
    try {
      const AudioSignal audio = LoadAudio(e.audio_path, manifest.sample_rate);
      const UtteranceFeatures feats = ExtractFeatures(audio, cfg);
      rec.scores = ScoreUtterance(feats.spectral, feats.residual, models,
                                  {eta, cfg.fusion.per_frame_mean});
    } catch (const Error &err) {
      throw Tagged(err, "utterance " + e.utterance_id);
    }
    rec.decided = Identify(rec.scores);
    rec.decided_spectral = Identify(Refuse(rec.scores, 1.0, cfg.fusion.per_frame_mean));
    rec.decided_residual = Identify(Refuse(rec.scores, 0.0, cfg.fusion.per_frame_mean));
  });

  std::vector<Decision> fused, spectral, residual;
  for (const auto &rec : run.records) {
    fused.push_back({rec.utterance_id, rec.true_speaker, rec.decided});
    spectral.push_back({rec.utterance_id, rec.true_speaker, rec.decided_spectral});
    residual.push_back({rec.utterance_id, rec.true_speaker, rec.decided_residual});
  }
  run.fused = Evaluate(fused);
  run.spectral_only = Evaluate(spectral);
  run.residual_only = Evaluate(residual);
  return run;
}

IdentifyResult IdentifyAudio(const AudioSignal &audio,
                             const SpeakerModelSet &models,
                             const ToolkitConfig &cfg, double eta) {
  const UtteranceFeatures feats = ExtractFeatures(audio, cfg);
  IdentifyResult out;
  out.scores = ScoreUtterance(feats.spectral, feats.residual, models,
                              {eta, cfg.fusion.per_frame_mean});
  out.speaker_id = Identify(out.scores);
  return out;
}

std::string ReportText(const EvaluationRun &run) {
  std::ostringstream out;
  const std::size_t total = run.records.size();
  auto pia_line = [&](const char *name, const EvaluationReport &r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-16s %8s %%  (%zu/%zu)\n", name,
                  Fixed(r.pia, 4).c_str(), r.correct, total);
    out << buf;
  };
  out << "identification accuracy (eta = " << Fixed(run.eta, 4)
      << (run.per_frame_mean ? ", per-frame mean scores" : "") << ")\n";
  pia_line("spectral-only", run.spectral_only);
  pia_line("residual-only", run.residual_only);
  pia_line("fused", run.fused);

  out << "\nutterance\ttrue\tfused\tspectral\tresidual\tspectral_ll\tresidual_ll\tcombined\n";
  for (const auto &rec : run.records) {
    const StreamScores &s = rec.scores.per_speaker.at(rec.decided);
    out << rec.utterance_id << '\t' << rec.true_speaker << '\t' << rec.decided << '\t'
        << rec.decided_spectral << '\t' << rec.decided_residual << '\t'
        << Fixed(s.spectral, 6) << '\t' << Fixed(s.residual, 6) << '\t'
        << Fixed(s.combined, 6) << '\n';
  }

  out << "\nspeaker\tcorrect\ttotal\n";
  for (const auto &[speaker, row] : run.fused.confusion) {
    std::size_t n = 0, ok = 0;
    for (const auto &[decided, count] : row) {
      n += count;
      if (decided == speaker) ok += count;
    }
    out << speaker << '\t' << ok << '\t' << n << '\n';
  }
  return out.str();
}

std::string ReportRecords(const EvaluationRun &run) {
  std::ostringstream out;
  auto scores_json = [](const StreamScores &s) {
    return nlohmann::ordered_json{
        {"spectral", s.spectral}, {"residual", s.residual}, {"combined", s.combined}};
  };
  for (const auto &rec : run.records) {
    nlohmann::ordered_json j;
    j["utterance_id"] = rec.utterance_id;
    j["true_id"] = rec.true_speaker;
    j["decided_id"] = rec.decided;
    j["decided_spectral_only"] = rec.decided_spectral;
    j["decided_residual_only"] = rec.decided_residual;
    j["eta"] = run.eta;
    j["spectral_frames"] = rec.scores.spectral_frames;
    j["residual_frames"] = rec.scores.residual_frames;
    j["decided_scores"] = scores_json(rec.scores.per_speaker.at(rec.decided));
    j["true_scores"] = scores_json(rec.scores.per_speaker.at(rec.true_speaker));
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace sidfuse
