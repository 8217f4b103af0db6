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

#include "eegfeat/models.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

namespace eegfeat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;
// Components with less occupancy than this keep their previous parameters.
constexpr double kMinOccupancy = 1e-3;
constexpr double kAbsoluteVarianceFloor = 1e-10;
constexpr double kSplitOffset = 0.2;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

double log_sum_row(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  const double m = v.maxCoeff();
  if (m == kNegInf) return kNegInf;
  return m + std::log((v.array() - m).exp().sum());
}

MatrixXd log_of(const MatrixXd& a) {
  return a.unaryExpr([](double v) { return v > 0.0 ? std::log(v) : kNegInf; });
}

/// T x S emission log densities.
MatrixXd state_log_densities(const HmmModel& model, const Eigen::Ref<const FeatureMatrix>& seq) {
  MatrixXd out(seq.rows(), model.num_states());
  for (int s = 0; s < model.num_states(); ++s) out.col(s) = model.states[s].log_densities(seq);
  return out;
}

MatrixXd forward(const MatrixXd& log_a, const MatrixXd& log_b) {
  const Index T = log_b.rows(), S = log_b.cols();
  MatrixXd alpha = MatrixXd::Constant(T, S, kNegInf);
  alpha(0, 0) = log_b(0, 0);
  for (Index t = 1; t < T; ++t) {
    for (Index j = 0; j < S; ++j) {
      double acc = kNegInf;
      for (Index i = 0; i < S; ++i) {
        if (log_a(i, j) == kNegInf || alpha(t - 1, i) == kNegInf) continue;
        acc = log_add(acc, alpha(t - 1, i) + log_a(i, j));
      }
      alpha(t, j) = acc == kNegInf ? kNegInf : acc + log_b(t, j);
    }
  }
  return alpha;
}

MatrixXd backward(const MatrixXd& log_a, const MatrixXd& log_b) {
  const Index T = log_b.rows(), S = log_b.cols();
  MatrixXd beta = MatrixXd::Constant(T, S, kNegInf);
  beta(T - 1, S - 1) = 0.0;
  for (Index t = T - 2; t >= 0; --t) {
    for (Index i = 0; i < S; ++i) {
      double acc = kNegInf;
      for (Index j = 0; j < S; ++j) {
        if (log_a(i, j) == kNegInf || beta(t + 1, j) == kNegInf) continue;
        acc = log_add(acc, log_a(i, j) + log_b(t + 1, j) + beta(t + 1, j));
      }
      beta(t, i) = acc;
    }
  }
  return beta;
}

std::vector<int> viterbi(const MatrixXd& log_a, const MatrixXd& log_b) {
  const Index T = log_b.rows(), S = log_b.cols();
  MatrixXd delta = MatrixXd::Constant(T, S, kNegInf);
  Eigen::MatrixXi back = Eigen::MatrixXi::Constant(T, S, -1);
  delta(0, 0) = log_b(0, 0);
  for (Index t = 1; t < T; ++t) {
    for (Index j = 0; j < S; ++j) {
      double best = kNegInf;
      int arg = -1;
      for (Index i = 0; i < S; ++i) {
        if (log_a(i, j) == kNegInf || delta(t - 1, i) == kNegInf) continue;
        const double v = delta(t - 1, i) + log_a(i, j);
        if (v > best) {
          best = v;
          arg = static_cast<int>(i);
        }
      }
      if (arg >= 0) {
        delta(t, j) = best + log_b(t, j);
        back(t, j) = arg;
      }
    }
  }
  if (delta(T - 1, S - 1) == kNegInf) return {};
  std::vector<int> path(T);
  path[T - 1] = static_cast<int>(S - 1);
  for (Index t = T - 1; t > 0; --t) path[t - 1] = back(t, path[t]);
  return path;
}

// ---------------------------------------------------------------- training

struct StateStats {
  VectorXd occupancy;  // per component
  MatrixXd sum;        // components x dim
  MatrixXd sum_sq;
};

struct Accumulator {
  std::vector<StateStats> states;
  MatrixXd transitions;
  double loglik = 0.0;

  Accumulator(const HmmModel& model) {
    const Index S = model.num_states();
    transitions = MatrixXd::Zero(S, S);
    for (const auto& gm : model.states) {
      states.push_back({VectorXd::Zero(gm.num_components()),
                        MatrixXd::Zero(gm.num_components(), gm.dim()),
                        MatrixXd::Zero(gm.num_components(), gm.dim())});
    }
  }

  // `posterior` is frames x components for state s.
  void add_frames(int s, const MatrixXd& posterior, const Eigen::Ref<const FeatureMatrix>& x) {
    auto& st = states[s];
    st.occupancy += posterior.colwise().sum().transpose();
    st.sum += posterior.transpose() * x;
    st.sum_sq += posterior.transpose() * x.array().square().matrix();
  }
};

HmmModel initial_model(Label label, int num_states, Index dim) {
  HmmModel m;
  m.class_label = label;
  m.transitions = MatrixXd::Zero(num_states, num_states);
  for (int s = 0; s < num_states; ++s) {
    m.transitions(s, s) = s + 1 < num_states ? 0.5 : 1.0;
    if (s + 1 < num_states) m.transitions(s, s + 1) = 0.5;
    m.states.push_back(GaussianMixture::single(VectorXd::Zero(dim), VectorXd::Ones(dim)));
  }
  return m;
}

void accumulate_alignment(Accumulator& acc, const HmmModel& model, const Epoch& x,
                          const std::vector<int>& path) {
  const Index T = x.rows();
  for (Index t = 0; t < T; ++t) {
    const int s = path[t];
    const auto& gm = model.states[s];
    MatrixXd post(1, gm.num_components());
    if (gm.num_components() == 1) {
      post(0, 0) = 1.0;
    } else {
      const MatrixXd comp = gm.component_log_densities(x.row(t));
      const double total = log_sum_row(comp.row(0));
      post = (comp.array() - total).exp().matrix();
    }
    acc.add_frames(s, post, x.row(t));
    if (t + 1 < T) acc.transitions(s, path[t + 1]) += 1.0;
  }
}

void accumulate_soft(Accumulator& acc, const HmmModel& model, const MatrixXd& log_a,
                     const Epoch& x) {
  const Index T = x.rows();
  const int S = model.num_states();
  std::vector<MatrixXd> comp(S);
  MatrixXd log_b(T, S);
  for (int s = 0; s < S; ++s) {
    comp[s] = model.states[s].component_log_densities(x);
    for (Index t = 0; t < T; ++t) log_b(t, s) = log_sum_row(comp[s].row(t));
  }
  const MatrixXd alpha = forward(log_a, log_b);
  const double ll = alpha(T - 1, S - 1);
  if (!std::isfinite(ll)) throw DataError("non-finite likelihood during training");
  const MatrixXd beta = backward(log_a, log_b);
  acc.loglik += ll;

  for (int s = 0; s < S; ++s) {
    const VectorXd gamma = (alpha.col(s) + beta.col(s)).array() - ll;
    MatrixXd post = comp[s];
    for (Index t = 0; t < T; ++t) {
      if (gamma[t] == kNegInf || log_b(t, s) == kNegInf) {
        post.row(t).setZero();
      } else {
        post.row(t) = (comp[s].row(t).array() - log_b(t, s) + gamma[t]).exp();
      }
    }
    acc.add_frames(s, post, x);
  }
  for (Index t = 0; t + 1 < T; ++t) {
    for (int i = 0; i < S; ++i) {
      if (alpha(t, i) == kNegInf) continue;
      for (int j = 0; j < S; ++j) {
        if (log_a(i, j) == kNegInf || beta(t + 1, j) == kNegInf) continue;
        acc.transitions(i, j) +=
            std::exp(alpha(t, i) + log_a(i, j) + log_b(t + 1, j) + beta(t + 1, j) - ll);
      }
    }
  }
}

void maximize(HmmModel& model, const Accumulator& acc, const VectorXd& var_floor) {
  const int S = model.num_states();
  for (int i = 0; i < S; ++i) {
    const double row = acc.transitions.row(i).sum();
    if (row > 0.0) model.transitions.row(i) = acc.transitions.row(i) / row;
  }
  for (int s = 0; s < S; ++s) {
    auto& gm = model.states[s];
    const auto& st = acc.states[s];
    const double total = st.occupancy.sum();
    if (total <= 0.0) continue;
    for (Index m = 0; m < gm.num_components(); ++m) {
      const double occ = st.occupancy[m];
      gm.weights[m] = occ / total;
      if (occ < kMinOccupancy) continue;
      const Eigen::RowVectorXd mean = st.sum.row(m) / occ;
      Eigen::RowVectorXd var = st.sum_sq.row(m) / occ - mean.cwiseAbs2();
      gm.means.row(m) = mean;
      gm.variances.row(m) = var.cwiseMax(var_floor.transpose());
    }
  }
}

double em_iteration(HmmModel& model, const std::vector<Epoch>& data, const VectorXd& var_floor) {
  Accumulator acc(model);
  const MatrixXd log_a = log_of(model.transitions);
  for (const auto& x : data) accumulate_soft(acc, model, log_a, x);
  maximize(model, acc, var_floor);
  return acc.loglik;
}

double total_loglik(const HmmModel& model, const std::vector<Epoch>& data) {
  VectorXd lls(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) lls[i] = loglik(model, data[i]);
  return lls.sum();
}

// Splits the heaviest components until the mixture reaches `target`
// components or has doubled.
void split_mixture(GaussianMixture& gm, Index target) {
  const Index start = gm.num_components();
  const Index goal = std::min(target, 2 * start);
  std::vector<bool> split(start, false);
  while (gm.num_components() < goal) {
    Index heaviest = -1;
    for (Index m = 0; m < start; ++m) {
      if (!split[m] && (heaviest < 0 || gm.weights[m] > gm.weights[heaviest])) heaviest = m;
    }
    split[heaviest] = true;
    const Index n = gm.num_components();
    const Eigen::RowVectorXd offset = kSplitOffset * gm.variances.row(heaviest).cwiseSqrt();
    gm.weights.conservativeResize(n + 1);
    gm.means.conservativeResize(n + 1, Eigen::NoChange);
    gm.variances.conservativeResize(n + 1, Eigen::NoChange);
    gm.weights[heaviest] *= 0.5;
    gm.weights[n] = gm.weights[heaviest];
    gm.means.row(n) = gm.means.row(heaviest) - offset;
    gm.means.row(heaviest) += offset;
    gm.variances.row(n) = gm.variances.row(heaviest);
  }
}

// Re-seeds components that lost all their occupancy from a random training
// frame, taking half the weight of the heaviest component.
void revive_dead_components(HmmModel& model, const std::vector<Epoch>& data,
                            std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick_epoch(0, data.size() - 1);
  for (auto& gm : model.states) {
    for (Index m = 0; m < gm.num_components(); ++m) {
      if (gm.weights[m] > 1e-6) continue;
      Index heaviest = 0;
      gm.weights.maxCoeff(&heaviest);
      const auto& x = data[pick_epoch(rng)];
      std::uniform_int_distribution<Index> pick_frame(0, x.rows() - 1);
      gm.means.row(m) = x.row(pick_frame(rng));
      gm.variances.row(m) = gm.variances.row(heaviest);
      gm.weights[heaviest] *= 0.5;
      gm.weights[m] = gm.weights[heaviest];
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- public API

std::vector<Epoch> epochs(const FeatureSequence& seq) {
  if (std::abs(seq.frame_period - kFramePeriod) > 1e-9) {
    throw DataError("epochs: frame period must be 0.1 s");
  }
  std::vector<Epoch> out;
  const Index n = seq.frame_count() / kFramesPerEpoch;
  out.reserve(n);
  for (Index e = 0; e < n; ++e) {
    out.emplace_back(seq.frames.middleRows(e * kFramesPerEpoch, kFramesPerEpoch));
  }
  return out;
}

MatrixXd GaussianMixture::component_log_densities(const Eigen::Ref<const FeatureMatrix>& x) const {
  if (x.cols() != dim()) throw DataError("feature dimension does not match model");
  MatrixXd out(x.rows(), num_components());
  for (Index m = 0; m < num_components(); ++m) {
    const Eigen::ArrayXd inv_var = variances.row(m).array().inverse().transpose();
    const double log_w = weights[m] > 0.0 ? std::log(weights[m]) : kNegInf;
    const double gconst =
        log_w - 0.5 * (static_cast<double>(dim()) * kLog2Pi + variances.row(m).array().log().sum());
    const Eigen::ArrayXXd diff = (x.rowwise() - means.row(m)).array();
    out.col(m) = gconst - 0.5 * (diff.square().matrix() * inv_var.matrix()).array();
  }
  return out;
}

VectorXd GaussianMixture::log_densities(const Eigen::Ref<const FeatureMatrix>& x) const {
  const MatrixXd comp = component_log_densities(x);
  VectorXd out(x.rows());
  for (Index t = 0; t < x.rows(); ++t) out[t] = log_sum_row(comp.row(t));
  return out;
}

GaussianMixture GaussianMixture::single(const Eigen::Ref<const VectorXd>& mean,
                                        const Eigen::Ref<const VectorXd>& variance) {
  GaussianMixture gm;
  gm.weights = VectorXd::Ones(1);
  gm.means = mean.transpose();
  gm.variances = variance.transpose();
  return gm;
}

void HmmModel::validate(double variance_floor) const {
  const int S = num_states();
  if (S < 1) throw DataError("HMM has no states");
  if (transitions.rows() != S || transitions.cols() != S) {
    throw DataError("HMM transition matrix has the wrong shape");
  }
  for (int i = 0; i < S; ++i) {
    if (std::abs(transitions.row(i).sum() - 1.0) > 1e-9) {
      throw DataError("HMM transition row " + std::to_string(i) + " does not sum to 1");
    }
    for (int j = 0; j < S; ++j) {
      if (transitions(i, j) < 0.0) throw DataError("negative transition probability");
      if (j != i && j != i + 1 && transitions(i, j) != 0.0) {
        throw DataError("HMM transitions must be strictly left-to-right");
      }
    }
  }
  for (const auto& gm : states) {
    if (gm.num_components() < 1 || gm.dim() != dim() || gm.variances.cols() != dim() ||
        gm.variances.rows() != gm.num_components() || gm.means.rows() != gm.num_components()) {
      throw DataError("inconsistent mixture shapes");
    }
    if (std::abs(gm.weights.sum() - 1.0) > 1e-9 || (gm.weights.array() < 0.0).any()) {
      throw DataError("mixture weights are not a distribution");
    }
    if ((gm.variances.array() < variance_floor).any() || (gm.variances.array() <= 0.0).any()) {
      throw DataError("mixture variance below floor");
    }
  }
}

double loglik(const HmmModel& model, const Eigen::Ref<const FeatureMatrix>& seq) {
  if (seq.cols() != model.dim()) {
    throw DataError("loglik: feature dimension " + std::to_string(seq.cols()) +
                    " does not match model dimension " + std::to_string(model.dim()));
  }
  if (seq.rows() < model.num_states()) return kNegInf;
  const MatrixXd alpha = forward(log_of(model.transitions), state_log_densities(model, seq));
  return alpha(seq.rows() - 1, model.num_states() - 1);
}

std::vector<int> viterbi_path(const HmmModel& model, const Eigen::Ref<const FeatureMatrix>& seq) {
  if (seq.cols() != model.dim()) throw DataError("viterbi: dimension mismatch");
  if (seq.rows() < model.num_states()) return {};
  return viterbi(log_of(model.transitions), state_log_densities(model, seq));
}

void TrainOptions::validate() const {
  if (num_states < 1 || num_states > kFramesPerEpoch) {
    throw ConfigError("train: num_states must be in 1..10");
  }
  if (num_mixtures < 1) throw ConfigError("train: num_mixtures must be >= 1");
  if (viterbi_passes < 0 || split_em_iterations < 0 || max_em_iterations < 0) {
    throw ConfigError("train: iteration counts must be non-negative");
  }
  if (!(variance_floor_scale > 0.0)) throw ConfigError("train: variance floor scale must be positive");
}

VectorXd variance_floor(const std::vector<const std::vector<Epoch>*>& epoch_sets, double scale) {
  Index dim = -1;
  double count = 0.0;
  VectorXd sum, sum_sq;
  for (const auto* set : epoch_sets) {
    for (const auto& x : *set) {
      if (dim < 0) {
        dim = x.cols();
        sum = VectorXd::Zero(dim);
        sum_sq = VectorXd::Zero(dim);
      }
      if (x.cols() != dim) throw DataError("training epochs have inconsistent dimensions");
      sum += x.colwise().sum().transpose();
      sum_sq += x.array().square().matrix().colwise().sum().transpose();
      count += static_cast<double>(x.rows());
    }
  }
  if (dim < 0) throw DataError("no training data");
  const VectorXd mean = sum / count;
  const VectorXd var = (sum_sq / count - mean.cwiseAbs2()).cwiseMax(0.0);
  return (scale * var).cwiseMax(kAbsoluteVarianceFloor);
}

HmmModel train_class(Label label, const std::vector<Epoch>& data,
                     const Eigen::Ref<const VectorXd>& var_floor_in,
                     const TrainOptions& options, TrainingTrace* trace) {
  options.validate();
  const Index required = static_cast<Index>(options.num_states) * options.num_mixtures;
  if (static_cast<Index>(data.size()) < required) {
    throw DataError("insufficient training data for class " + std::string(to_string(label)) +
                    ": " + std::to_string(data.size()) + " epochs, need " +
                    std::to_string(required));
  }
  const Index dim = data.front().cols();
  for (const auto& x : data) {
    if (x.cols() != dim) throw DataError("training epochs have inconsistent dimensions");
    if (x.rows() < options.num_states) throw DataError("epoch shorter than the state count");
  }
  const VectorXd var_floor = var_floor_in;
  if (var_floor.size() != dim) throw DataError("variance floor has the wrong dimension");

  std::seed_seq seq{options.seed, static_cast<std::uint64_t>(class_index(label))};
  std::mt19937_64 rng(seq);
  const int S = options.num_states;
  HmmModel model = initial_model(label, S, dim);

  // Flat start: uniform segmentation.
  {
    Accumulator acc(model);
    for (const auto& x : data) {
      std::vector<int> path(x.rows());
      for (Index t = 0; t < x.rows(); ++t) path[t] = static_cast<int>(t * S / x.rows());
      accumulate_alignment(acc, model, x, path);
    }
    maximize(model, acc, var_floor);
  }

  for (int pass = 0; pass < options.viterbi_passes; ++pass) {
    Accumulator acc(model);
    const MatrixXd log_a = log_of(model.transitions);
    for (const auto& x : data) {
      const auto path = viterbi(log_a, state_log_densities(model, x));
      if (path.empty()) throw DataError("non-finite likelihood during alignment");
      accumulate_alignment(acc, model, x, path);
    }
    maximize(model, acc, var_floor);
  }

  while (model.states.front().num_components() < options.num_mixtures) {
    for (auto& gm : model.states) split_mixture(gm, options.num_mixtures);
    for (int it = 0; it < options.split_em_iterations; ++it) em_iteration(model, data, var_floor);
    revive_dead_components(model, data, rng);
  }

  std::vector<double> history;
  for (int it = 0; it < options.max_em_iterations; ++it) {
    const double ll = em_iteration(model, data, var_floor);
    if (!std::isfinite(ll)) throw DataError("non-finite likelihood during training");
    history.push_back(ll);
    const std::size_t n = history.size();
    if (n >= 2 && std::abs(history[n - 1] - history[n - 2]) <
                      options.em_tolerance * std::abs(history[n - 2])) {
      break;
    }
  }
  if (trace) {
    history.push_back(total_loglik(model, data));
    trace->em_loglik = std::move(history);
  }
  return model;
}

ModelSet train(const EpochSets& epoch_sets, const TrainOptions& options, int system_id) {
  options.validate();
  std::vector<const std::vector<Epoch>*> sets;
  for (const auto& s : epoch_sets) sets.push_back(&s);
  const VectorXd floor = variance_floor(sets, options.variance_floor_scale);

  std::array<std::future<HmmModel>, kNumClasses> jobs;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    jobs[c] = std::async(std::launch::async, [&, c] {
      return train_class(kAllClasses[c], epoch_sets[c], floor, options);
    });
  }
  ModelSet out;
  out.system_id = system_id;
  out.dim = floor.size();
  // Collect every job before rethrowing so no worker outlives its inputs.
  std::exception_ptr first_error;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    try {
      out.models[c] = jobs[c].get();
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

Label argmax_class(const std::array<double, kNumClasses>& logliks) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (logliks[c] > logliks[best]) best = c;
  }
  return kAllClasses[best];
}

double target_score(const std::array<double, kNumClasses>& logliks) {
  double targ = kNegInf, bckg = kNegInf;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (is_target_class(kAllClasses[c])) {
      targ = std::max(targ, logliks[c]);
    } else {
      bckg = std::max(bckg, logliks[c]);
    }
  }
  return targ - bckg;
}

std::vector<EpochHypothesis> classify(const ModelSet& models, const FeatureSequence& seq) {
  for (const auto& m : models.models) {
    if (m.dim() != seq.dim) {
      throw DataError("classify: features have dimension " + std::to_string(seq.dim) +
                      " but the " + std::string(to_string(m.class_label)) +
                      " model expects " + std::to_string(m.dim()));
    }
  }
  const auto segs = epochs(seq);
  std::vector<EpochHypothesis> out;
  out.reserve(segs.size());
  for (std::size_t e = 0; e < segs.size(); ++e) {
    EpochHypothesis h;
    h.channel_name = seq.channel_name;
    h.epoch_index = static_cast<Index>(e);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      h.per_class_loglik[c] = loglik(models.models[c], segs[e]);
    }
    h.hypothesis = argmax_class(h.per_class_loglik);
    h.score = target_score(h.per_class_loglik);
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace eegfeat
