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

#ifndef EEGFEAT_MODELS_HPP
#define EEGFEAT_MODELS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eegfeat/common.hpp"
#include "eegfeat/dynamics.hpp"

namespace eegfeat {

/// A 10-frame segment, frames in rows.
using Epoch = FeatureMatrix;

/// Non-overlapping 10-frame epochs; a trailing partial epoch is dropped.
/// Requires a 0.1 s frame period.
std::vector<Epoch> epochs(const FeatureSequence& seq);

// Diagonal-covariance Gaussian mixture. Component parameters are stored one
// per row.
struct GaussianMixture {
  VectorXd weights;     // num_components
  MatrixXd means;       // num_components x dim
  MatrixXd variances;   // num_components x dim

  Index num_components() const { return weights.size(); }
  Index dim() const { return means.cols(); }

  /// Per-component log(w_m N(x; mu_m, var_m)) for every row of `x`,
  /// returned as rows(x) x num_components.
  MatrixXd component_log_densities(const Eigen::Ref<const FeatureMatrix>& x) const;
  /// log sum_m w_m N(x_t; mu_m, var_m) for every row of `x`.
  VectorXd log_densities(const Eigen::Ref<const FeatureMatrix>& x) const;

  static GaussianMixture single(const Eigen::Ref<const VectorXd>& mean,
                                const Eigen::Ref<const VectorXd>& variance);
};

// Strict left-to-right HMM: each state either loops or moves to the next.
// Sequences enter in state 0 and must end in the last state.
struct HmmModel {
  Label class_label = Label::BCKG;
  MatrixXd transitions;  // num_states x num_states, row-stochastic
  std::vector<GaussianMixture> states;

  int num_states() const { return static_cast<int>(states.size()); }
  Index dim() const { return states.empty() ? 0 : states.front().dim(); }

  /// Checks row sums, topology, mixture weights, and the variance floor.
  void validate(double variance_floor = 0.0) const;
};

/// Forward-algorithm log-likelihood in the log domain. Returns -inf when the
/// sequence is shorter than the number of states.
double loglik(const HmmModel& model, const Eigen::Ref<const FeatureMatrix>& seq);

/// Most likely state path (Viterbi). Empty when no path exists.
std::vector<int> viterbi_path(const HmmModel& model,
                              const Eigen::Ref<const FeatureMatrix>& seq);

struct TrainOptions {
  int num_states = 3;
  int num_mixtures = 4;
  std::uint64_t seed = 0;
  int viterbi_passes = 5;
  int split_em_iterations = 5;   // EM after each mixture split
  int max_em_iterations = 50;    // final EM stage
  double em_tolerance = 1e-6;    // relative change that stops the final stage
  double variance_floor_scale = 1e-4;

  void validate() const;
};

struct TrainingTrace {
  /// Total training log-likelihood at the start of each final-stage EM
  /// iteration, plus the value after the last update.
  std::vector<double> em_loglik;
};

/// variance_floor_scale x per-dimension variance over every frame, with a
/// small absolute minimum.
VectorXd variance_floor(const std::vector<const std::vector<Epoch>*>& epoch_sets,
                        double scale);

/// Flat start, Viterbi re-segmentation, mixture splitting, then EM.
HmmModel train_class(Label label, const std::vector<Epoch>& data,
                     const Eigen::Ref<const VectorXd>& var_floor,
                     const TrainOptions& options, TrainingTrace* trace = nullptr);

using EpochSets = std::array<std::vector<Epoch>, kNumClasses>;

struct ModelSet {
  int system_id = 0;
  Index dim = 0;
  std::array<HmmModel, kNumClasses> models;
};

/// One model per class, trained in parallel. Deterministic for a given seed.
ModelSet train(const EpochSets& epoch_sets, const TrainOptions& options,
               int system_id = 0);

struct EpochHypothesis {
  std::string channel_name;
  Index epoch_index = 0;
  std::array<double, kNumClasses> per_class_loglik{};
  Label hypothesis = Label::BCKG;
  double score = 0.0;  // max target loglik - max background loglik
};

/// Argmax over classes with ties going to the earlier class.
Label argmax_class(const std::array<double, kNumClasses>& logliks);

/// Two-way detection score: best target-class minus best background-class
/// log-likelihood.
double target_score(const std::array<double, kNumClasses>& logliks);

std::vector<EpochHypothesis> classify(const ModelSet& models, const FeatureSequence& seq);

/// Versioned text format; values are printed with 17 significant digits.
void write_models(const ModelSet& models, const std::filesystem::path& path);
ModelSet read_models(const std::filesystem::path& path);

}  // namespace eegfeat

#endif  // EEGFEAT_MODELS_HPP
