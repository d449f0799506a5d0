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

#include "sidfuse/hosmr.h"

#include <cmath>

#include "sidfuse/error.h"

namespace sidfuse {

ResidualFrame NormalizeResidual(const ResidualFrame &residual) {
  if (residual.e.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty residual frame");
  double peak = 0.0;
  for (double v : residual.e) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0) || !std::isfinite(peak))
    throw Error(ErrorCode::kDegenerateFrame, "residual peak is zero");

  ResidualFrame out;
  out.source_frame_index = residual.source_frame_index;
  out.e.resize(residual.size());
  for (std::size_t n = 0; n < residual.size(); ++n)
    out.e[n] = residual.e[n] / peak;
  return out;
}

HosmrVector CentralMoments(const ResidualFrame &residual,
                           std::size_t num_moments) {
  if (num_moments == 0)
    throw Error(ErrorCode::kInvalidArgument, "need at least one moment");
  if (residual.e.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty residual frame");

  const double count = static_cast<double>(residual.size());
  double mean = 0.0;
  for (double v : residual.e) mean += v;
  mean /= count;

  // sums[j] accumulates (e - mu)^(j + 2).
  std::vector<double> sums(num_moments, 0.0);
  for (double v : residual.e) {
    const double d = v - mean;
    double power = d * d;
    for (std::size_t j = 0; j < num_moments; ++j) {
      sums[j] += power;
      power *= d;
    }
  }

  HosmrVector out;
  out.moments.resize(num_moments);
  for (std::size_t j = 0; j < num_moments; ++j) out.moments[j] = sums[j] / count;
  return out;
}

HosmrExtraction ExtractHosmr(const FrameSequence &frames,
                             const HosmrConfig &cfg) {
  if (frames.empty())
    throw Error(ErrorCode::kInvalidArgument, "no frames to analyse");

  HosmrExtraction out;
  out.vectors.reserve(frames.size());
  out.frame_indices.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    try {
      const auto &frame = frames.frames[f];
      const LpCoefficients lp = ComputeLp(frame, cfg.lp_order);
      const ResidualFrame residual = InverseFilter(frame, lp, f);
      out.vectors.push_back(
          CentralMoments(NormalizeResidual(residual), cfg.num_moments));
      out.frame_indices.push_back(f);
    } catch (const Error &err) {
      if (err.code() != ErrorCode::kDegenerateFrame) throw;
      ++out.skipped_frames;
    }
  }
  if (out.vectors.empty())
    throw Error(ErrorCode::kNoUsableFrames,
                "all " + std::to_string(frames.size()) +
                    " frames were degenerate");
  return out;
}

}  // namespace sidfuse
