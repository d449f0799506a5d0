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

// Per-frame linear prediction (autocorrelation method, Levinson-Durbin) and
// LP residual by inverse filtering.
//
// Sign convention: s(n) = -sum_k a(k) s(n-k) + e(n), so the inverse filter is
// A(z) = 1 + sum_k a(k) z^-k.

#ifndef SIDFUSE_LP_RESIDUAL_H_
#define SIDFUSE_LP_RESIDUAL_H_

#include <cstddef>
#include <span>
#include <vector>

namespace sidfuse {

struct LpCoefficients {
  std::vector<double> a;  // a(1) .. a(p)
  double gain = 0.0;      // RMS of the in-frame residual

  std::size_t order() const { return a.size(); }
};

struct ResidualFrame {
  std::vector<double> e;
  std::size_t source_frame_index = 0;

  std::size_t size() const { return e.size(); }
};

/// Relative ridge added to r(0) before solving.
inline constexpr double kLpRegularization = 1e-9;

/// Biased autocorrelation r(0..max_lag) of the zero-extended frame, divided
/// by the frame length.
std::vector<double> Autocorrelation(std::span<const double> frame,
                                    std::size_t max_lag);

/// Solves the Toeplitz normal equations by Levinson-Durbin recursion.
/// `r` holds r(0..p). Returns a(1..p) and writes the final prediction error
/// power into *error_power when non-null. Throws kDegenerateFrame if the
/// recursion meets a non-positive error power.
std::vector<double> LevinsonDurbin(std::span<const double> r,
                                   double *error_power = nullptr);

/// LP analysis of one frame. Throws kInvalidArgument for order 0 or a frame
/// no longer than the order, kDegenerateFrame for an all-zero frame.
LpCoefficients ComputeLp(std::span<const double> frame, std::size_t order);

/// e(n) = s(n) + sum_k a(k) s(n-k) with zero history before the frame.
ResidualFrame InverseFilter(std::span<const double> frame,
                            const LpCoefficients &lp,
                            std::size_t source_frame_index = 0);

/// The predictor output s_hat(n) = -sum_k a(k) s(n-k), zero history.
std::vector<double> Predict(std::span<const double> frame,
                            const LpCoefficients &lp);

/// Runs `excitation` through the all-pole filter 1/A(z) from zero state.
std::vector<double> SynthesizeAllPole(std::span<const double> excitation,
                                      std::span<const double> a);

}  // namespace sidfuse

#endif  // SIDFUSE_LP_RESIDUAL_H_
