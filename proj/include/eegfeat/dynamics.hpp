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

#ifndef EEGFEAT_DYNAMICS_HPP
#define EEGFEAT_DYNAMICS_HPP

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "eegfeat/common.hpp"
#include "eegfeat/energy.hpp"
#include "eegfeat/frontend.hpp"

namespace eegfeat {

struct DeltaSpec {
  int n_first = 9;
  int n_second = 3;

  void validate() const;
};

/// Regression deltas along the rows (time) of `seq`, column by column:
///
///   d_t = sum_{n=1..N} n (c_{t+n} - c_{t-n}) / (2 sum_{n=1..N} n^2)
///
/// with edge frames replicated beyond either end.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic,
              Eigen::RowMajor>
delta(const Eigen::MatrixBase<Derived>& seq, int order) {
  using Scalar = typename Derived::Scalar;
  if (order < 1) throw ConfigError("delta: regression order must be >= 1");
  const Index T = seq.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(T, seq.cols());
  if (T == 0) return out;
  Scalar denom = 0;
  for (int n = 1; n <= order; ++n) denom += static_cast<Scalar>(n * n);
  denom *= 2;
  for (Index t = 0; t < T; ++t) {
    out.row(t).setZero();
    for (int n = 1; n <= order; ++n) {
      const Index ahead = std::min<Index>(t + n, T - 1);
      const Index behind = std::max<Index>(t - n, 0);
      out.row(t) += static_cast<Scalar>(n) * (seq.row(ahead) - seq.row(behind));
    }
    out.row(t) /= denom;
  }
  return out;
}

enum class DeltaMode { none, first, first_and_second };

struct FeatureSystemConfig {
  int system_id = 0;
  bool include_e_t = false;
  bool include_e_f = false;
  bool include_e_d = false;
  DeltaMode deltas = DeltaMode::none;
  bool e_d_second_delta = true;

  /// Number of static features: 7 cepstra plus the selected energies.
  int static_dim() const;
  int dim() const;
  /// Short description in table style, e.g. "Cepstral + E_f + E_d + Δ".
  std::string description() const;
};

inline constexpr int kNumSystems = 16;

/// Systems 1..16. Throws ConfigError for any other id.
const FeatureSystemConfig& feature_system(int system_id);

struct FeatureSequence {
  FeatureMatrix frames;  // frame_count x dim
  int dim = 0;
  double frame_period = kFramePeriod;
  std::string channel_name;
  int system_id = 0;

  Index frame_count() const { return frames.rows(); }
};

/// Static features in the order c1..c7, E_f, E_t, E_d (selected ones only),
/// then their deltas, then delta-deltas. System 16 drops the delta-delta of
/// E_d.
FeatureSequence assemble(const Eigen::Ref<const FeatureMatrix>& cepstra,
                         const std::vector<EnergyTerms>& energies,
                         const FeatureSystemConfig& config,
                         const DeltaSpec& delta_spec);

// FEATv1 binary layout, all integers and floats little-endian:
//   char[8]  "FEATv1\0\0"
//   u32      dim
//   u32      frame_count
//   u32      system_id
//   f64      frame_period
//   u32      channel name length, then that many UTF-8 bytes
//   f32      frame_count x dim values, row-major
void write_features(const FeatureSequence& seq, const std::filesystem::path& path);
FeatureSequence read_features(const std::filesystem::path& path);

}  // namespace eegfeat

#endif  // EEGFEAT_DYNAMICS_HPP
