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

#include "eegfeat/energy.hpp"

#include <cmath>

namespace eegfeat {

Index DiffEnergySpec::frames() const {
  auto m = static_cast<Index>(std::llround(window_dur / step_dur));
  if (m % 2 == 0) ++m;
  return m;
}

void DiffEnergySpec::validate() const {
  if (!(window_dur > 0.0) || !(step_dur > 0.0)) {
    throw ConfigError("diff energy: window and step must be positive");
  }
  if (frames() < 1) throw ConfigError("diff energy: window shorter than one frame");
}

double freq_energy(const SpectralFrame& spectral, double floor) {
  if (spectral.filter_outputs.size() < 1) throw DataError("freq_energy: no filter outputs");
  return std::log(std::max(spectral.filter_outputs.squaredNorm(), floor));
}

VectorXd diff_energy(const Eigen::Ref<const VectorXd>& e_f, const DiffEnergySpec& spec) {
  spec.validate();
  return diff_energy(e_f, spec.frames());
}

}  // namespace eegfeat
