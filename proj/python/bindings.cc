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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sidfuse/audio_frontend.h"
#include "sidfuse/config.h"
#include "sidfuse/error.h"
#include "sidfuse/gmm.h"
#include "sidfuse/hosmr.h"
#include "sidfuse/identification.h"
#include "sidfuse/lp_residual.h"
#include "sidfuse/manifest.h"
#include "sidfuse/model_store.h"
#include "sidfuse/pipeline.h"
#include "sidfuse/spectral_features.h"
#include "sidfuse/synthetic.h"
#include "sidfuse/wav.h"

namespace py = pybind11;
using namespace sidfuse;

namespace {

AudioSignal MakeSignal(std::vector<double> samples, double sample_rate) {
  AudioSignal s;
  s.samples = std::move(samples);
  s.sample_rate = sample_rate;
  return s;
}

ResidualFrame MakeResidual(std::vector<double> e) {
  ResidualFrame r;
  r.e = std::move(e);
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sidfuse: LP-residual moment features fused with spectral features for GMM speaker identification";

  py::register_exception<Error>(m, "SidfuseError");

  py::enum_<FeatureKind>(m, "FeatureKind")
      .value("MFCC", FeatureKind::kMfcc)
      .value("LFCC", FeatureKind::kLfcc)
      .value("LPCC", FeatureKind::kLpcc)
      .value("HOSMR", FeatureKind::kHosmr);

  py::class_<PreprocessConfig>(m, "PreprocessConfig")
      .def(py::init<>())
      .def_readwrite("pre_emphasis", &PreprocessConfig::pre_emphasis)
      .def_readwrite("frame_len", &PreprocessConfig::frame_len)
      .def_readwrite("frame_shift", &PreprocessConfig::frame_shift)
      .def_readwrite("silence_energy_ratio", &PreprocessConfig::silence_energy_ratio);

  // Front end. Signals cross the boundary as (samples, sample_rate).
  m.def("pre_emphasize",
        [](std::vector<double> x, double coeff) {
          return PreEmphasize(MakeSignal(std::move(x), 8000.0), coeff).samples;
        },
        py::arg("samples"), py::arg("coeff") = 0.97);
  m.def("remove_silence",
        [](std::vector<double> x, const PreprocessConfig &cfg) {
          return RemoveSilence(MakeSignal(std::move(x), 8000.0), cfg).samples;
        },
        py::arg("samples"), py::arg("config") = PreprocessConfig{});
  m.def("frame_and_window",
        [](std::vector<double> x, const PreprocessConfig &cfg) {
          return FrameAndWindow(MakeSignal(std::move(x), 8000.0), cfg).frames;
        },
        py::arg("samples"), py::arg("config") = PreprocessConfig{});
  m.def("preprocess",
        [](std::vector<double> x, double sample_rate, const PreprocessConfig &cfg) {
          return Preprocess(MakeSignal(std::move(x), sample_rate), cfg).frames;
        },
        py::arg("samples"), py::arg("sample_rate") = 8000.0,
        py::arg("config") = PreprocessConfig{});
  m.def("hamming_window", &HammingWindow, py::arg("length"));

  // LP analysis.
  py::class_<LpCoefficients>(m, "LpCoefficients")
      .def(py::init<>())
      .def_readwrite("a", &LpCoefficients::a)
      .def_readwrite("gain", &LpCoefficients::gain)
      .def_property_readonly("order", &LpCoefficients::order);
  m.def("compute_lp",
        [](const std::vector<double> &frame, std::size_t order) {
          return ComputeLp(frame, order);
        },
        py::arg("frame"), py::arg("order") = 17);
  m.def("inverse_filter",
        [](const std::vector<double> &frame, const LpCoefficients &lp) {
          return InverseFilter(frame, lp).e;
        },
        py::arg("frame"), py::arg("lp"));

  // HOSMR.
  m.def("normalize_residual",
        [](std::vector<double> e) { return NormalizeResidual(MakeResidual(std::move(e))).e; },
        py::arg("residual"));
  m.def("central_moments",
        [](std::vector<double> e, std::size_t k) {
          return CentralMoments(MakeResidual(std::move(e)), k).moments;
        },
        py::arg("residual"), py::arg("num_moments") = 6);
  m.def("extract_hosmr",
        [](std::vector<std::vector<double>> frames, std::size_t lp_order, std::size_t k) {
          FrameSequence seq;
          seq.frame_len = frames.empty() ? 0 : frames.front().size();
          seq.frames = std::move(frames);
          HosmrExtraction ex = ExtractHosmr(seq, {lp_order, k});
          FeatureMatrix out;
          for (auto &v : ex.vectors) out.push_back(std::move(v.moments));
          return py::make_tuple(out, ex.skipped_frames);
        },
        py::arg("frames"), py::arg("lp_order") = 17, py::arg("num_moments") = 6);

  // Spectral features.
  m.def("power_spectrum",
        [](const std::vector<double> &frame, std::size_t n) { return PowerSpectrum(frame, n); },
        py::arg("frame"), py::arg("fft_size") = 256);
  m.def("cepstra_from_energies",
        [](const std::vector<double> &e, std::size_t n) { return CepstraFromEnergies(e, n); },
        py::arg("energies"), py::arg("num_cepstra") = 19);
  m.def("lpcc_from_lp", &LpccFromLp, py::arg("lp"), py::arg("num_cepstra") = 19);
  m.def("spectral_features",
        [](std::vector<std::vector<double>> frames, FeatureKind kind, double sample_rate) {
          SpectralConfig cfg;
          cfg.kind = kind;
          cfg.sample_rate = sample_rate;
          FrameSequence seq;
          seq.frames = std::move(frames);
          return SpectralExtractor(cfg).ComputeAll(seq);
        },
        py::arg("frames"), py::arg("kind") = FeatureKind::kMfcc,
        py::arg("sample_rate") = 8000.0);

  // GMM.
  py::class_<GmmModel>(m, "GmmModel")
      .def(py::init<>())
      .def_readwrite("weights", &GmmModel::weights)
      .def_readwrite("means", &GmmModel::means)
      .def_readwrite("variances", &GmmModel::variances)
      .def_readwrite("feature_kind", &GmmModel::feature_kind)
      .def_property_readonly("num_components", &GmmModel::num_components)
      .def_property_readonly("dim", &GmmModel::dim)
      .def("validate", &GmmModel::Validate)
      .def("log_likelihood",
           [](const GmmModel &g, const std::vector<double> &x) { return LogLikelihood(x, g); })
      .def("total_log_likelihood",
           [](const GmmModel &g, const FeatureMatrix &x) { return TotalLogLikelihood(x, g); })
      .def("to_bytes",
           [](const GmmModel &g) {
             const auto bytes = SerializeModel(g);
             return py::bytes(reinterpret_cast<const char *>(bytes.data()), bytes.size());
           })
      .def_static("from_bytes", [](const py::bytes &b) {
        const std::string s = b;
        return DeserializeModel(std::span(reinterpret_cast<const std::uint8_t *>(s.data()), s.size()));
      });

  py::class_<TrainingConfig>(m, "TrainingConfig")
      .def(py::init<>())
      .def_readwrite("num_components", &TrainingConfig::num_components)
      .def_readwrite("em_iterations", &TrainingConfig::em_iterations)
      .def_readwrite("variance_floor_factor", &TrainingConfig::variance_floor_factor)
      .def_readwrite("lbg_split_epsilon", &TrainingConfig::lbg_split_epsilon)
      .def_readwrite("seed", &TrainingConfig::seed);

  py::class_<EmResult>(m, "EmResult")
      .def_readonly("model", &EmResult::model)
      .def_readonly("initial_log_likelihood", &EmResult::initial_log_likelihood)
      .def_readonly("log_likelihoods", &EmResult::log_likelihoods)
      .def_readonly("collapsed_resets", &EmResult::collapsed_resets);

  m.def("lbg_init", &LbgInit, py::arg("features"), py::arg("config"));
  m.def("em_train", &EmTrain, py::arg("features"), py::arg("init"), py::arg("config"));
  m.def("train_gmm", &TrainGmm, py::arg("features"), py::arg("config"),
        py::arg("kind") = FeatureKind::kMfcc);
  m.def("component_log_density",
        [](const std::vector<double> &x, std::size_t i, const GmmModel &g) {
          return ComponentLogDensity(x, i, g);
        },
        py::arg("x"), py::arg("component"), py::arg("model"));

  // Identification.
  py::class_<StreamScores>(m, "StreamScores")
      .def_readonly("spectral", &StreamScores::spectral)
      .def_readonly("residual", &StreamScores::residual)
      .def_readonly("combined", &StreamScores::combined);
  py::class_<UtteranceScores>(m, "UtteranceScores")
      .def_readonly("per_speaker", &UtteranceScores::per_speaker)
      .def_readonly("eta", &UtteranceScores::eta);
  py::class_<SpeakerModelSet>(m, "SpeakerModelSet")
      .def(py::init<>())
      .def("add",
           [](SpeakerModelSet &set, const std::string &id, GmmModel spectral, GmmModel residual) {
             set.Add(id, {std::move(spectral), std::move(residual)});
           },
           py::arg("speaker_id"), py::arg("spectral"), py::arg("residual"))
      .def("__len__", &SpeakerModelSet::size)
      .def("speakers", [](const SpeakerModelSet &set) {
        std::vector<std::string> ids;
        for (const auto &[id, _] : set.models()) ids.push_back(id);
        return ids;
      });
  m.def("fuse_scores", &FuseScores, py::arg("spectral"), py::arg("residual"), py::arg("eta"));
  m.def("score_utterance",
        [](const FeatureMatrix &spectral, const FeatureMatrix &residual,
           const SpeakerModelSet &models, double eta, bool per_frame_mean) {
          return ScoreUtterance(spectral, residual, models, {eta, per_frame_mean});
        },
        py::arg("spectral"), py::arg("residual"), py::arg("models"), py::arg("eta") = 0.5,
        py::arg("per_frame_mean") = false);
  m.def("identify", &Identify, py::arg("scores"));
  m.def("pia",
        [](const std::vector<std::pair<std::string, std::string>> &pairs) {
          std::vector<Decision> d;
          for (std::size_t i = 0; i < pairs.size(); ++i)
            d.push_back({std::to_string(i), pairs[i].first, pairs[i].second});
          return Evaluate(d).pia;
        },
        py::arg("decisions"), "PIA of (true, identified) pairs.");

  // Corpus and commands.
  m.def("load_audio",
        [](const std::filesystem::path &path, double rate) {
          const AudioSignal s = LoadAudio(path, rate);
          return py::make_tuple(s.samples, s.sample_rate);
        },
        py::arg("path"), py::arg("expected_rate") = 0.0);
  m.def("save_audio",
        [](const std::vector<double> &x, double rate, const std::filesystem::path &path) {
          SaveAudio(MakeSignal(x, rate), path);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("path"));
  m.def("generate_synthetic_corpus",
        [](std::size_t speakers, std::uint64_t seed, const std::filesystem::path &out,
           std::size_t train, std::size_t test, double seconds) {
          SyntheticOptions options;
          options.utterance_seconds = seconds;
          const CorpusManifest man = GenerateSyntheticCorpus(
              MakeSyntheticSpeakers(speakers, seed), train, test, options, seed, out);
          return (out / "manifest.tsv");
        },
        py::arg("speakers"), py::arg("seed"), py::arg("out_dir"), py::arg("train_utts") = 8,
        py::arg("test_utts") = 4, py::arg("seconds") = 2.0);
  m.def("default_config_text", [] { return ToText(DefaultConfig()); });
  m.def("train",
        [](const std::filesystem::path &manifest, const std::filesystem::path &out,
           const std::string &config_text) {
          const ToolkitConfig cfg = ParseConfig(config_text);
          TrainOutput result = TrainCommand(LoadManifest(manifest), cfg);
          SaveModelStore(result.models, cfg, out);
          std::vector<std::vector<double>> curves;
          for (auto &log : result.logs) curves.push_back(log.log_likelihoods);
          return curves;
        },
        py::arg("manifest"), py::arg("store"), py::arg("config_text") = "",
        "Trains and stores models; returns the per-model EM log-likelihood curves.");
  m.def("evaluate",
        [](const std::filesystem::path &manifest, const std::filesystem::path &store_dir,
           std::optional<double> eta) {
          const ModelStore store = LoadModelStore(store_dir);
          const EvaluationRun run = EvaluateCommand(LoadManifest(manifest), store.models,
                                                    store.config,
                                                    eta.value_or(store.config.fusion.eta));
          py::dict out;
          out["spectral_only"] = run.spectral_only.pia;
          out["residual_only"] = run.residual_only.pia;
          out["fused"] = run.fused.pia;
          out["report"] = ReportText(run);
          out["records"] = ReportRecords(run);
          return out;
        },
        py::arg("manifest"), py::arg("store"), py::arg("eta") = py::none());
  m.def("identify_audio",
        [](const std::filesystem::path &audio, const std::filesystem::path &store_dir,
           std::optional<double> eta) {
          const ModelStore store = LoadModelStore(store_dir);
          return IdentifyAudio(LoadAudio(audio, store.config.sample_rate), store.models,
                               store.config, eta.value_or(store.config.fusion.eta))
              .speaker_id;
        },
        py::arg("audio"), py::arg("store"), py::arg("eta") = py::none());
}
