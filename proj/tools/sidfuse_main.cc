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

// sidfuse command-line driver: synth, train, evaluate, identify, config.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sidfuse/config.h"
#include "sidfuse/error.h"
#include "sidfuse/manifest.h"
#include "sidfuse/model_store.h"
#include "sidfuse/pipeline.h"
#include "sidfuse/synthetic.h"
#include "sidfuse/wav.h"

namespace fs = std::filesystem;
using namespace sidfuse;

namespace {

void ApplyOverrides(ToolkitConfig &cfg, const std::vector<std::string> &sets) {
  for (const std::string &kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::kParseError, "--set expects key=value, got '" + kv + "'");
    cfg.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.Finalize();
}

void WriteFile(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Speaker identification with fused spectral and LP-residual moment features"};
  app.require_subcommand(1);

  // synth
  auto *synth = app.add_subcommand("synth", "Generate a synthetic speaker corpus");
  std::size_t num_speakers = 10, train_utts = 8, test_utts = 4;
  std::uint64_t seed = 1;
  double seconds = 2.0;
  fs::path synth_out;
  synth->add_option("--speakers", num_speakers, "Number of speakers")->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed, "Generator seed");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--train", train_utts, "Training utterances per speaker");
  synth->add_option("--test", test_utts, "Test utterances per speaker");
  synth->add_option("--seconds", seconds, "Utterance duration in seconds");

  // train
  auto *train = app.add_subcommand("train", "Train per-speaker models from a manifest");
  fs::path manifest_path, config_path, store_out;
  std::vector<std::string> overrides;
  train->add_option("--manifest", manifest_path, "Corpus manifest")->required()->check(CLI::ExistingFile);
  train->add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  train->add_option("--out", store_out, "Model store directory")->required();
  train->add_option("--set", overrides, "Override a config key (key=value)");

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "Evaluate test utterances against a store");
  fs::path eval_manifest, store_dir, report_path, records_path;
  std::optional<double> eta;
  std::optional<std::size_t> threads;
  evaluate->add_option("--manifest", eval_manifest, "Corpus manifest")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--store", store_dir, "Model store directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--eta", eta, "Fusion weight of the spectral stream")->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--report", report_path, "Text report path")->required();
  evaluate->add_option("--records", records_path, "JSON-lines record path (default: <report>.jsonl)");
  evaluate->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // identify
  auto *identify = app.add_subcommand("identify", "Identify the speaker of one recording");
  fs::path audio_path, id_store;
  std::optional<double> id_eta;
  identify->add_option("--audio", audio_path, "WAVE file")->required()->check(CLI::ExistingFile);
  identify->add_option("--store", id_store, "Model store directory")->required()->check(CLI::ExistingDirectory);
  identify->add_option("--eta", id_eta, "Fusion weight of the spectral stream")->check(CLI::Range(0.0, 1.0));

  // config
  auto *config = app.add_subcommand("config", "Print the default configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      SyntheticOptions options;
      options.utterance_seconds = seconds;
      const auto specs = MakeSyntheticSpeakers(num_speakers, seed);
      const CorpusManifest manifest =
          GenerateSyntheticCorpus(specs, train_utts, test_utts, options, seed, synth_out);
      std::cout << "wrote " << manifest.entries.size() << " utterances to "
                << (synth_out / "manifest.tsv").string() << "\n";
    } else if (*train) {
      ToolkitConfig cfg = config_path.empty() ? DefaultConfig() : LoadConfig(config_path);
      ApplyOverrides(cfg, overrides);
      const CorpusManifest manifest = LoadManifest(manifest_path);
      const TrainOutput out = TrainCommand(manifest, cfg);
      SaveModelStore(out.models, cfg, store_out);
      for (const auto &log : out.logs) {
        std::cout << log.speaker_id << '\t' << log.stream << '\t'
                  << FeatureKindName(log.kind) << '\t' << log.num_vectors << " vectors";
        for (double ll : log.log_likelihoods) {
          char buf[48];
          std::snprintf(buf, sizeof(buf), "\t%.6f", ll);
          std::cout << buf;
        }
        std::cout << '\n';
        if (log.data_starved)
          std::cerr << "warning: " << log.speaker_id << " " << log.stream
                    << " model has fewer than 10 vectors per component\n";
        if (log.collapsed_resets > 0)
          std::cerr << "warning: " << log.speaker_id << " " << log.stream << " reset "
                    << log.collapsed_resets << " collapsed component(s)\n";
      }
      std::cout << "stored " << 2 * out.models.size() << " models in " << store_out.string()
                << "\n";
    } else if (*evaluate) {
      ModelStore store = LoadModelStore(store_dir);
      if (threads) store.config.threads = *threads;
      const double weight = eta.value_or(store.config.fusion.eta);
      const CorpusManifest manifest = LoadManifest(eval_manifest);
      const EvaluationRun run = EvaluateCommand(manifest, store.models, store.config, weight);
      const std::string text = ReportText(run);
      WriteFile(report_path, text);
      WriteFile(records_path.empty() ? fs::path(report_path.string() + ".jsonl") : records_path,
                ReportRecords(run));
      std::cout << text.substr(0, text.find("\n\n") + 1);
    } else if (*identify) {
      const ModelStore store = LoadModelStore(id_store);
      const AudioSignal audio = LoadAudio(audio_path, store.config.sample_rate);
      const IdentifyResult result = IdentifyAudio(
          audio, store.models, store.config, id_eta.value_or(store.config.fusion.eta));
      std::cout << result.speaker_id << '\n';
      for (const auto &[speaker, s] : result.scores.per_speaker) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "  %-12s combined %.6f  spectral %.6f  residual %.6f\n",
                      speaker.c_str(), s.combined, s.spectral, s.residual);
        std::cout << buf;
      }
    } else if (*config) {
      std::cout << ToText(DefaultConfig());
    }
  } catch (const Error &err) {
    std::cerr << "sidfuse: " << err.what() << '\n';
    return 2;
  } catch (const std::exception &err) {
    std::cerr << "sidfuse: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
