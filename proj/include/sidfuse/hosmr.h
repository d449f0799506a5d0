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

// Higher-order statistical moments of the LP residual (HOSMR).
//
// Each windowed frame is LP-analysed, inverse filtered, peak-normalized to
// [-1, 1] and summarised by its central moments of orders 2 .. K+1. The mean
// (order 1) is excluded because it is zero after centering.

#ifndef SIDFUSE_HOSMR_H_
#define SIDFUSE_HOSMR_H_

#include <cstddef>
#include <vector>

#include "sidfuse/audio_frontend.h"
#include "sidfuse/lp_residual.h"

namespace sidfuse {

struct HosmrConfig {
  std::size_t lp_order = 17;
  std::size_t num_moments = 6;  // K; orders 2 .. K+1
};

struct HosmrVector {
  std::vector<double> moments;  // m_2 .. m_{K+1}

  std::size_t size() const { return moments.size(); }
};

struct HosmrExtraction {
  std::vector<HosmrVector> vectors;
  std::vector<std::size_t> frame_indices;  // source frame of each vector
  std::size_t skipped_frames = 0;
};

/// Divides by max |e(n)|. Throws kDegenerateFrame when that maximum is zero
/// and kInvalidArgument for an empty frame.
ResidualFrame NormalizeResidual(const ResidualFrame &residual);

/// m_k = (1/N) sum (e(n) - mu)^k for k = 2 .. K+1.
HosmrVector CentralMoments(const ResidualFrame &residual,
                           std::size_t num_moments);

/// Per frame: ComputeLp -> InverseFilter -> NormalizeResidual ->
/// CentralMoments. Frames that are degenerate at any stage are skipped and
/// counted. Throws kNoUsableFrames if nothing survives.
HosmrExtraction ExtractHosmr(const FrameSequence &frames,
                             const HosmrConfig &cfg);

}  // namespace sidfuse

#endif  // SIDFUSE_HOSMR_H_
