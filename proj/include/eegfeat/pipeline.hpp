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

#ifndef EEGFEAT_PIPELINE_HPP
#define EEGFEAT_PIPELINE_HPP

#include <string>
#include <vector>

#include "eegfeat/config.hpp"
#include "eegfeat/dynamics.hpp"
#include "eegfeat/energy.hpp"
#include "eegfeat/eval.hpp"
#include "eegfeat/frontend.hpp"
#include "eegfeat/ingest.hpp"
#include "eegfeat/models.hpp"

namespace eegfeat {

struct FrontendConfig {
  ResampleSpec resample;
  FrameSpec frame;  // sample_rate follows resample.target_rate
  FilterBankSpec bank;
  DiffEnergySpec diff;
  DeltaSpec delta;
  double log_floor = kDefaultLogFloor;
  double energy_floor = kDefaultEnergyFloor;

  /// Reads `frontend.*`, `energy.*`, `delta.*` and `resample.*` keys.
  static FrontendConfig from_config(const Config& config);
  void validate() const;
};

/// Per-frame cepstra and energy terms of one channel, before a feature
/// system is chosen.
struct ChannelAnalysis {
  std::string channel_name;
  FeatureMatrix cepstra;  // frames x 7
  std::vector<EnergyTerms> energies;
};

ChannelAnalysis analyze_channel(const Channel& channel, const FrontendConfig& config);

/// Channels are analysed in parallel; output order follows the record.
std::vector<ChannelAnalysis> analyze_record(const SignalRecord& record,
                                            const FrontendConfig& config);

FeatureSequence extract_features(const ChannelAnalysis& analysis, int system_id,
                                 const DeltaSpec& delta);

/// Reference label of every whole epoch of every sequence.
std::vector<EpochReference> epoch_references(const std::vector<FeatureSequence>& features,
                                             const std::vector<EventLabel>& labels);

/// Training epochs grouped by their reference class.
EpochSets collect_epochs(const std::vector<FeatureSequence>& features,
                         const std::vector<EventLabel>& labels);

std::vector<EpochHypothesis> classify_all(const ModelSet& models,
                                          const std::vector<FeatureSequence>& features);

struct Corpus {
  SignalRecord record;
  std::vector<EventLabel> labels;
};

struct ExperimentOptions {
  std::vector<int> systems;
  TrainOptions train;
  int det_thresholds = 200;
};

struct SystemResult {
  ScoreRow row;
  std::vector<DETPoint> det;
  ModelSet models;
  std::vector<EpochHypothesis> hypotheses;
  std::vector<EpochReference> references;
};

/// Trains and scores each requested system. Front-end analysis is shared
/// across systems.
std::vector<SystemResult> run_experiment(const Corpus& train, const Corpus& eval,
                                         const FrontendConfig& frontend,
                                         const ExperimentOptions& options);

}  // namespace eegfeat

#endif  // EEGFEAT_PIPELINE_HPP
