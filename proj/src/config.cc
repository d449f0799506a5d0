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

#include "sidfuse/config.h"

#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

#include "sidfuse/error.h"

namespace sidfuse {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseDouble(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorCode::kParseError,
                "bad number '" + std::string(value) + "' for " + std::string(key));
  return out;
}

std::size_t ParseSize(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorCode::kParseError,
                "bad integer '" + std::string(value) + "' for " + std::string(key));
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorCode::kParseError,
              "bad boolean '" + std::string(value) + "' for " + std::string(key));
}

std::string Num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void ToolkitConfig::Set(std::string_view key, std::string_view value) {
  if (key == "sample_rate") sample_rate = ParseDouble(key, value);
  else if (key == "pre_emphasis") preprocess.pre_emphasis = ParseDouble(key, value);
  else if (key == "frame_len") preprocess.frame_len = ParseSize(key, value);
  else if (key == "frame_shift") preprocess.frame_shift = ParseSize(key, value);
  else if (key == "silence_energy_ratio")
    preprocess.silence_energy_ratio = ParseDouble(key, value);
  else if (key == "lp_order") hosmr.lp_order = ParseSize(key, value);
  else if (key == "num_moments") hosmr.num_moments = ParseSize(key, value);
  else if (key == "spectral_feature") spectral.kind = ParseFeatureKind(value);
  else if (key == "num_filters") spectral.num_filters = ParseSize(key, value);
  else if (key == "num_cepstra") spectral.num_cepstra = ParseSize(key, value);
  else if (key == "fft_size") spectral.fft_size = ParseSize(key, value);
  else if (key == "lpcc_order") spectral.lpcc_order = ParseSize(key, value);
  else if (key == "spectral_components")
    spectral_training.num_components = ParseSize(key, value);
  else if (key == "residual_components")
    residual_training.num_components = ParseSize(key, value);
  else if (key == "em_iterations")
    spectral_training.em_iterations = residual_training.em_iterations =
        ParseSize(key, value);
  else if (key == "variance_floor_factor")
    spectral_training.variance_floor_factor =
        residual_training.variance_floor_factor = ParseDouble(key, value);
  else if (key == "lbg_split_epsilon")
    spectral_training.lbg_split_epsilon = residual_training.lbg_split_epsilon =
        ParseDouble(key, value);
  else if (key == "seed")
    spectral_training.seed = residual_training.seed = ParseSize(key, value);
  else if (key == "eta") fusion.eta = ParseDouble(key, value);
  else if (key == "per_frame_mean") fusion.per_frame_mean = ParseBool(key, value);
  else if (key == "threads") threads = ParseSize(key, value);
  else
    throw Error(ErrorCode::kParseError, "unknown config key '" + std::string(key) + "'");
}

void ToolkitConfig::Finalize() {
  if (!(sample_rate > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "sample_rate must be positive");
  spectral.sample_rate = sample_rate;
  preprocess.Validate();
  spectral_training.Validate();
  residual_training.Validate();
  if (hosmr.lp_order == 0 || hosmr.lp_order >= preprocess.frame_len)
    throw Error(ErrorCode::kInvalidArgument, "lp_order must be in [1, frame_len)");
  if (hosmr.num_moments == 0)
    throw Error(ErrorCode::kInvalidArgument, "num_moments must be positive");
  if (spectral.kind == FeatureKind::kHosmr)
    throw Error(ErrorCode::kInvalidArgument, "spectral_feature cannot be hosmr");
  if (spectral.num_cepstra == 0)
    throw Error(ErrorCode::kInvalidArgument, "num_cepstra must be positive");
  if (spectral.kind == FeatureKind::kLpcc) {
    if (spectral.lpcc_order == 0 || spectral.lpcc_order >= preprocess.frame_len)
      throw Error(ErrorCode::kInvalidArgument, "lpcc_order must be in [1, frame_len)");
  } else {
    if (spectral.num_cepstra >= spectral.num_filters)
      throw Error(ErrorCode::kInvalidArgument, "num_cepstra must be < num_filters");
    if (!std::has_single_bit(spectral.fft_size) ||
        spectral.fft_size < preprocess.frame_len)
      throw Error(ErrorCode::kInvalidArgument,
                  "fft_size must be a power of two no smaller than frame_len");
  }
  if (!(fusion.eta >= 0.0 && fusion.eta <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "eta must lie in [0, 1]");
}

ToolkitConfig DefaultConfig() {
  ToolkitConfig cfg;
  cfg.Finalize();
  return cfg;
}

ToolkitConfig ParseConfig(std::string_view text) {
  ToolkitConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kParseError,
                  "config line " + std::to_string(line_no) + " has no '='");
    cfg.Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
  cfg.Finalize();
  return cfg;
}

ToolkitConfig LoadConfig(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

std::string ToText(const ToolkitConfig &cfg) {
  std::ostringstream out;
  out << "# sidfuse pipeline configuration\n"
      << "\n# front end\n"
      << "sample_rate = " << Num(cfg.sample_rate) << "  # Hz\n"
      << "pre_emphasis = " << Num(cfg.preprocess.pre_emphasis) << "\n"
      << "frame_len = " << cfg.preprocess.frame_len << "  # 20 ms at 8 kHz\n"
      << "frame_shift = " << cfg.preprocess.frame_shift << "  # 50% overlap\n"
      << "silence_energy_ratio = " << Num(cfg.preprocess.silence_energy_ratio)
      << "  # fraction of mean block energy\n"
      << "\n# residual stream (HOSMR)\n"
      << "lp_order = " << cfg.hosmr.lp_order << "\n"
      << "num_moments = " << cfg.hosmr.num_moments << "  # orders 2 .. K+1\n"
      << "\n# spectral stream\n"
      << "spectral_feature = " << FeatureKindName(cfg.spectral.kind)
      << "  # mfcc | lfcc | lpcc\n"
      << "num_filters = " << cfg.spectral.num_filters << "\n"
      << "num_cepstra = " << cfg.spectral.num_cepstra << "  # c0 discarded\n"
      << "fft_size = " << cfg.spectral.fft_size << "\n"
      << "lpcc_order = " << cfg.spectral.lpcc_order << "\n"
      << "\n# speaker models\n"
      << "spectral_components = " << cfg.spectral_training.num_components << "\n"
      << "residual_components = " << cfg.residual_training.num_components << "\n"
      << "em_iterations = " << cfg.spectral_training.em_iterations << "\n"
      << "variance_floor_factor = "
      << Num(cfg.spectral_training.variance_floor_factor)
      << "  # fraction of global variance\n"
      << "lbg_split_epsilon = " << Num(cfg.spectral_training.lbg_split_epsilon)
      << "\n"
      << "seed = " << cfg.spectral_training.seed << "\n"
      << "\n# score fusion: eta * spectral + (1 - eta) * residual\n"
      << "eta = " << Num(cfg.fusion.eta) << "\n"
      << "per_frame_mean = " << (cfg.fusion.per_frame_mean ? "true" : "false")
      << "\n"
      << "\n# scheduling\n"
      << "threads = " << cfg.threads << "  # 0 = all cores\n";
  return out.str();
}

}  // namespace sidfuse
