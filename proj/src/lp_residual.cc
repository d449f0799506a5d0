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

#include "sidfuse/lp_residual.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sidfuse/error.h"

namespace sidfuse {

std::vector<double> Autocorrelation(std::span<const double> frame,
                                    std::size_t max_lag) {
  const std::size_t n = frame.size();
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t lag = 0; lag <= max_lag && lag < n; ++lag) {
    double acc = 0.0;
    for (std::size_t i = lag; i < n; ++i) acc += frame[i] * frame[i - lag];
    r[lag] = acc / static_cast<double>(n);
  }
  return r;
}

std::vector<double> LevinsonDurbin(std::span<const double> r,
                                   double *error_power) {
  if (r.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty autocorrelation");
  const std::size_t p = r.size() - 1;
  std::vector<double> a(p, 0.0), prev(p, 0.0);
  double err = r[0];
  if (!(err > 0.0) || !std::isfinite(err))
    throw Error(ErrorCode::kDegenerateFrame, "zero-lag energy is not positive");

  for (std::size_t i = 0; i < p; ++i) {
    // Reflection coefficient for order i + 1.
    double acc = r[i + 1];
    for (std::size_t j = 0; j < i; ++j) acc += a[j] * r[i - j];
    const double k = -acc / err;
    prev.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
    a[i] = k;
    for (std::size_t j = 0; j < i; ++j) a[j] = prev[j] + k * prev[i - 1 - j];
    err *= (1.0 - k * k);
    if (!(err > 0.0) || !std::isfinite(err))
      throw Error(ErrorCode::kDegenerateFrame,
                  "autocorrelation matrix is numerically singular at order " +
                      std::to_string(i + 1));
  }
  if (error_power != nullptr) *error_power = err;
  return a;
}

LpCoefficients ComputeLp(std::span<const double> frame, std::size_t order) {
  if (order == 0)
    throw Error(ErrorCode::kInvalidArgument, "LP order must be at least 1");
  if (frame.size() <= order)
    throw Error(ErrorCode::kInvalidArgument,
                "frame length must exceed the LP order");
  if (std::all_of(frame.begin(), frame.end(),
                  [](double s) { return s == 0.0; }))
    throw Error(ErrorCode::kDegenerateFrame, "frame is identically zero");

  std::vector<double> r = Autocorrelation(frame, order);
  r[0] += kLpRegularization * r[0];

  LpCoefficients lp;
  lp.a = LevinsonDurbin(r);

  const ResidualFrame res = InverseFilter(frame, lp);
  double power = 0.0;
  for (double e : res.e) power += e * e;
  lp.gain = std::sqrt(power / static_cast<double>(res.size()));
  return lp;
}

ResidualFrame InverseFilter(std::span<const double> frame,
                            const LpCoefficients &lp,
                            std::size_t source_frame_index) {
  const std::size_t p = lp.order();
  ResidualFrame out;
  out.source_frame_index = source_frame_index;
  out.e.resize(frame.size());
  for (std::size_t n = 0; n < frame.size(); ++n) {
    double acc = 0.0;
    const std::size_t kmax = std::min(p, n);
    for (std::size_t k = 1; k <= kmax; ++k) acc += lp.a[k - 1] * frame[n - k];
    out.e[n] = frame[n] + acc;
  }
  return out;
}

std::vector<double> Predict(std::span<const double> frame,
                            const LpCoefficients &lp) {
  const std::size_t p = lp.order();
  std::vector<double> pred(frame.size(), 0.0);
  for (std::size_t n = 0; n < frame.size(); ++n) {
    double acc = 0.0;
    const std::size_t kmax = std::min(p, n);
    for (std::size_t k = 1; k <= kmax; ++k) acc += lp.a[k - 1] * frame[n - k];
    pred[n] = -acc;
  }
  return pred;
}

std::vector<double> SynthesizeAllPole(std::span<const double> excitation,
                                      std::span<const double> a) {
  const std::size_t p = a.size();
  std::vector<double> y(excitation.size(), 0.0);
  for (std::size_t n = 0; n < y.size(); ++n) {
    double acc = excitation[n];
    const std::size_t kmax = std::min(p, n);
    for (std::size_t k = 1; k <= kmax; ++k) acc -= a[k - 1] * y[n - k];
    y[n] = acc;
  }
  return y;
}

}  // namespace sidfuse
