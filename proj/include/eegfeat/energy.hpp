// Copyright 2026 The eegfeat Authors.
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

#ifndef EEGFEAT_ENERGY_HPP
#define EEGFEAT_ENERGY_HPP

#include <deque>

#include "eegfeat/common.hpp"
#include "eegfeat/frontend.hpp"

namespace eegfeat {

inline constexpr double kDefaultEnergyFloor = 1e-10;

struct EnergyTerms {
  double e_t = 0.0;  // log time-domain energy
  double e_f = 0.0;  // log filter-bank energy
  double e_d = 0.0;  // differential energy, >= 0
};

struct DiffEnergySpec {
  double window_dur = 0.9;  // s
  double step_dur = kFramePeriod;

  /// round(window_dur / step_dur), bumped to the next odd number.
  Index frames() const;
  void validate() const;
};

/// log(max(mean(x^2), floor)) over an already windowed frame.
template <typename Derived>
typename Derived::Scalar time_energy(const Eigen::MatrixBase<Derived>& frame,
                                     double floor = kDefaultEnergyFloor) {
  using Scalar = typename Derived::Scalar;
  if (frame.size() < 1) throw DataError("time_energy: empty frame");
  const Scalar mean_square = frame.squaredNorm() / static_cast<Scalar>(frame.size());
  return std::log(std::max(mean_square, static_cast<Scalar>(floor)));
}

/// log(max(sum_k X(k)^2, floor)) where X(k) are the filter bank outputs.
double freq_energy(const SpectralFrame& spectral, double floor = kDefaultEnergyFloor);

/// Differential energy: max - min of `seq` over the `window` frames centred
/// on each index. Windows shrink at the sequence ends. `window` must be odd.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> diff_energy(
    const Eigen::MatrixBase<Derived>& seq, Index window) {
  using Scalar = typename Derived::Scalar;
  if (seq.size() < 1) throw DataError("diff_energy: empty sequence");
  if (window < 1 || window % 2 == 0) throw ConfigError("diff_energy: window must be odd");
  const Index n = seq.size();
  const Index half = (window - 1) / 2;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n);

  // Monotonic deques of indices over the window [t - half, t + half].
  std::deque<Index> maxq, minq;
  Index next = 0;
  for (Index t = 0; t < n; ++t) {
    const Index hi = std::min(n - 1, t + half);
    for (; next <= hi; ++next) {
      while (!maxq.empty() && seq(maxq.back()) <= seq(next)) maxq.pop_back();
      maxq.push_back(next);
      while (!minq.empty() && seq(minq.back()) >= seq(next)) minq.pop_back();
      minq.push_back(next);
    }
    const Index lo = t - half;
    while (maxq.front() < lo) maxq.pop_front();
    while (minq.front() < lo) minq.pop_front();
    out(t) = seq(maxq.front()) - seq(minq.front());
  }
  return out;
}

VectorXd diff_energy(const Eigen::Ref<const VectorXd>& e_f, const DiffEnergySpec& spec);

}  // namespace eegfeat

#endif  // EEGFEAT_ENERGY_HPP
