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

#include "eegfeat/dynamics.hpp"

namespace eegfeat {

void DeltaSpec::validate() const {
  if (n_first < 1 || n_second < 1) throw ConfigError("delta orders must be >= 1");
}

int FeatureSystemConfig::static_dim() const {
  return kNumCepstra + include_e_f + include_e_t + include_e_d;
}

int FeatureSystemConfig::dim() const {
  const int s = static_dim();
  switch (deltas) {
    case DeltaMode::none: return s;
    case DeltaMode::first: return 2 * s;
    case DeltaMode::first_and_second:
      return 3 * s - ((include_e_d && !e_d_second_delta) ? 1 : 0);
  }
  return s;
}

std::string FeatureSystemConfig::description() const {
  std::string d = "Cepstral";
  if (include_e_f) d += " + E_f";
  if (include_e_t) d += " + E_t";
  if (include_e_d) d += " + E_d";
  if (deltas != DeltaMode::none) d += " + Δ";
  if (deltas == DeltaMode::first_and_second) d += " + ΔΔ";
  if (deltas == DeltaMode::first_and_second && include_e_d && !e_d_second_delta) {
    d += " (no ΔΔ for E_d)";
  }
  return d;
}

namespace {

constexpr FeatureSystemConfig make(int id, bool et, bool ef, bool ed, DeltaMode dm,
                                   bool ed_dd = true) {
  return FeatureSystemConfig{id, et, ef, ed, dm, ed_dd};
}

constexpr auto N = DeltaMode::none;
constexpr auto D1 = DeltaMode::first;
constexpr auto D2 = DeltaMode::first_and_second;

//                                             id  E_t    E_f    E_d
constexpr std::array<FeatureSystemConfig, kNumSystems> kSystems = {
    make(1, false, false, false, N),
    make(2, false, true, false, N),
    make(3, true, false, false, N),
    make(4, false, false, true, N),
    make(5, false, true, true, N),
    make(6, false, false, false, D1),
    make(7, false, true, false, D1),
    make(8, true, false, false, D1),
    make(9, false, false, true, D1),
    make(10, false, true, true, D1),
    make(11, false, false, false, D2),
    make(12, false, true, false, D2),
    make(13, true, false, false, D2),
    make(14, false, false, true, D2),
    make(15, false, true, true, D2),
    make(16, false, true, true, D2, false),
};

}  // namespace

const FeatureSystemConfig& feature_system(int system_id) {
  if (system_id < 1 || system_id > kNumSystems) {
    throw ConfigError("feature system must be in 1.." + std::to_string(kNumSystems) +
                      ", got " + std::to_string(system_id));
  }
  return kSystems[system_id - 1];
}

FeatureSequence assemble(const Eigen::Ref<const FeatureMatrix>& cepstra,
                         const std::vector<EnergyTerms>& energies,
                         const FeatureSystemConfig& config,
                         const DeltaSpec& delta_spec) {
  delta_spec.validate();
  const Index T = cepstra.rows();
  if (T < 1) throw DataError("assemble: no frames");
  if (cepstra.cols() != kNumCepstra) throw DataError("assemble: expected 7 cepstra per frame");
  if (static_cast<Index>(energies.size()) != T) {
    throw DataError("assemble: " + std::to_string(T) + " cepstral frames but " +
                    std::to_string(energies.size()) + " energy frames");
  }

  const int s = config.static_dim();
  FeatureMatrix statics(T, s);
  statics.leftCols(kNumCepstra) = cepstra;
  int col = kNumCepstra;
  if (config.include_e_f) {
    for (Index t = 0; t < T; ++t) statics(t, col) = energies[t].e_f;
    ++col;
  }
  if (config.include_e_t) {
    for (Index t = 0; t < T; ++t) statics(t, col) = energies[t].e_t;
    ++col;
  }
  if (config.include_e_d) {
    for (Index t = 0; t < T; ++t) statics(t, col) = energies[t].e_d;
    ++col;
  }

  FeatureSequence seq;
  seq.dim = config.dim();
  seq.system_id = config.system_id;
  seq.frame_period = kFramePeriod;
  seq.frames.resize(T, seq.dim);
  seq.frames.leftCols(s) = statics;
  if (config.deltas == DeltaMode::none) return seq;

  const FeatureMatrix d1 = delta(statics, delta_spec.n_first);
  seq.frames.middleCols(s, s) = d1;
  if (config.deltas == DeltaMode::first) return seq;

  const FeatureMatrix d2 = delta(d1, delta_spec.n_second);
  // E_d is the last static column, so dropping its delta-delta drops the
  // final column.
  seq.frames.rightCols(seq.dim - 2 * s) = d2.leftCols(seq.dim - 2 * s);
  return seq;
}

}  // namespace eegfeat
