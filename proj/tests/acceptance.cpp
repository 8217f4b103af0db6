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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "eegfeat/dynamics.hpp"
#include "eegfeat/energy.hpp"
#include "eegfeat/eval.hpp"
#include "eegfeat/ingest.hpp"
#include "eegfeat/models.hpp"
#include "eegfeat/pipeline.hpp"
#include "eegfeat/synth.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace eegfeat;

namespace {

// Tolerances and sizes.
constexpr double kDeltaTol = 1e-12;
constexpr int kDeltaSequences = 1000;
constexpr double kFreqEnergyTol = 1e-12;
constexpr int kSpectralFrames = 1000;
constexpr int kRangeSequences = 500;
constexpr double kForwardTol = 1e-10;
constexpr int kForwardCases = 100;
constexpr double kEmTol = 1e-8;
constexpr int kEmIterations = 50;

constexpr int kExperimentSeeds = 5;
constexpr int kRequiredSeeds = 4;
constexpr int kExperimentChannels = 16;
constexpr double kTrainDuration = 375.0;  // s per channel
constexpr double kEvalDuration = 150.0;   // s per channel
constexpr std::size_t kMinEvalEpochs = 2000;
constexpr int kDetGridPoints = 50;
constexpr double kDetGridLow = 0.005;
constexpr double kDetGridHigh = 0.5;
constexpr double kDetDominance = 0.8;

constexpr int kSpikeTrials = 200;
constexpr double kSpikeRecord = 10.0;  // s
constexpr double kSpikeHitRate = 0.95;
constexpr double kSpikeToBackground = 6.0;  // spike peak over background RMS

constexpr double kEdfTol = 1e-6;

constexpr int kParadigmSets = 100;
constexpr int kDiagonalSamples = 10000;
constexpr double kDiagonalTol = 0.05;

constexpr double kRealTimeFactor = 200.0;
constexpr double kPerformanceSignal = 3600.0;  // s

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Curves produced by the synthetic experiment, rechecked for monotonicity.
std::vector<std::vector<DETPoint>> g_experiment_curves;

// ---------------------------------------------------------------- 1

Outcome dimension_ledger() {
  const int dims[kNumSystems] = {7, 8, 8, 8, 9, 14, 16, 16, 16, 18, 21, 24, 24, 24, 27, 26};
  std::mt19937_64 rng(1);
  const Index T = 40;
  const FeatureMatrix cepstra = testing::random_vector(rng, T * 7).reshaped(T, 7);
  std::vector<EnergyTerms> energies(T, EnergyTerms{1.0, 2.0, 0.5});
  int wrong = 0;
  std::string got;
  for (int id = 1; id <= kNumSystems; ++id) {
    const auto seq = assemble(cepstra, energies, feature_system(id), DeltaSpec{});
    const int d = static_cast<int>(seq.frames.cols());
    if (d != dims[id - 1] || seq.dim != d || feature_system(id).dim() != d) ++wrong;
    got += (id > 1 ? "," : "") + std::to_string(d);
  }
  return {wrong == 0, "dims {" + got + "}"};
}

// ---------------------------------------------------------------- 2

Outcome delta_exactness() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  double affine_err = 0.0;
  for (int trial = 0; trial < kDeltaSequences; ++trial) {
    const Index T = 20 + static_cast<Index>(rng() % 60);
    const double a = coef(rng), b = coef(rng);
    MatrixXd x(T, 1);
    for (Index t = 0; t < T; ++t) x(t, 0) = a * t + b;
    for (int order : {9, 3}) {
      const MatrixXd d = delta(x, order);
      for (Index t = order; t < T - order; ++t) affine_err = std::max(affine_err, std::abs(d(t, 0) - a));
    }
  }
  double oracle_err = 0.0;
  for (int trial = 0; trial < kDeltaSequences; ++trial) {
    const Index T = 1 + static_cast<Index>(rng() % 80);
    const Index cols = 1 + static_cast<Index>(rng() % 4);
    const int order = trial % 2 ? 9 : 3;
    const MatrixXd x = testing::random_vector(rng, T * cols, -50.0, 50.0).reshaped(T, cols);
    oracle_err = std::max(oracle_err, (delta(x, order) - testing::oracle_delta(x, order)).cwiseAbs().maxCoeff());
  }
  return {affine_err <= kDeltaTol && oracle_err < kDeltaTol,
          format("affine max err %.2e, oracle max err %.2e over %d sequences", affine_err, oracle_err,
                 kDeltaSequences)};
}

// ---------------------------------------------------------------- 3

Outcome energy_oracles() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  SpectralFrame sf;
  for (int trial = 0; trial < kSpectralFrames; ++trial) {
    sf.filter_outputs = testing::random_vector(rng, 20, 0.0, 1e3);
    double sum = 0.0;
    for (Index k = 0; k < 20; ++k) sum += sf.filter_outputs(k) * sf.filter_outputs(k);
    worst = std::max(worst, testing::relative_error(freq_energy(sf), std::log(sum)));
  }
  int mismatches = 0;
  for (Index window : {1, 3, 9, 15}) {
    for (int trial = 0; trial < kRangeSequences; ++trial) {
      const Index n = 1 + static_cast<Index>(rng() % 400);
      VectorXd x = testing::random_vector(rng, n, -25.0, 5.0);
      if (trial % 4 == 0) x = x.array().round();
      if (!(diff_energy(x, window).array() == testing::oracle_range(x, window).array()).all()) {
        ++mismatches;
      }
    }
  }
  return {worst < kFreqEnergyTol && mismatches == 0,
          format("E_f max rel err %.2e; E_d mismatches %d of %d", worst, mismatches,
                 4 * kRangeSequences)};
}

// ---------------------------------------------------------------- 4

Outcome hmm_correctness() {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < kForwardCases; ++trial) {
    const int S = 1 + static_cast<int>(rng() % 3);
    const int M = 1 + static_cast<int>(rng() % 3);
    const Index dim = 1 + static_cast<Index>(rng() % 3);
    const Index T = S + static_cast<Index>(rng() % (5 - S));
    const HmmModel m = testing::random_hmm(rng, S, M, dim);
    const FeatureMatrix x = testing::random_vector(rng, T * dim, -3.0, 3.0).reshaped(T, dim);
    worst = std::max(worst, testing::relative_error(loglik(m, x), testing::oracle_loglik(m, x)));
  }

  // EM on front-end features of a synthetic corpus.
  SynthSpec spec = SynthSpec::defaults();
  spec.seed = 4;
  spec.duration = 300.0;
  spec.num_channels = 4;
  const SynthCorpus corpus = generate(spec);
  const FrontendConfig fe;
  std::vector<FeatureSequence> feats;
  for (const auto& a : analyze_record(corpus.record, fe)) feats.push_back(extract_features(a, 10, fe.delta));
  const EpochSets sets = collect_epochs(feats, corpus.labels);
  std::vector<const std::vector<Epoch>*> all;
  for (const auto& s : sets) all.push_back(&s);
  const VectorXd floor = variance_floor(all, 1e-4);
  TrainOptions opt;
  opt.max_em_iterations = kEmIterations;
  opt.em_tolerance = 0.0;
  double worst_drop = 0.0;
  std::size_t steps = 0;
  for (Label c : {Label::GPED, Label::BCKG}) {
    TrainingTrace trace;
    train_class(c, sets[class_index(c)], floor, opt, &trace);
    for (std::size_t i = 1; i < trace.em_loglik.size(); ++i) {
      worst_drop = std::max(worst_drop, trace.em_loglik[i - 1] - trace.em_loglik[i]);
      ++steps;
    }
  }
  return {worst < kForwardTol && worst_drop <= kEmTol && steps == 2 * kEmIterations,
          format("forward max rel err %.2e; largest EM decrease %.2e over %zu steps", worst,
                 worst_drop, steps)};
}

// ---------------------------------------------------------------- 5

Outcome synthetic_ordering() {
  const std::vector<int> systems = {1, 2, 5, 10};
  int ok_a = 0, ok_b = 0, ok_c = 0;
  std::size_t min_epochs = SIZE_MAX;
  for (int s = 0; s < kExperimentSeeds; ++s) {
    SynthSpec train_spec = SynthSpec::defaults();
    train_spec.seed = 1000 + 2 * s;
    train_spec.duration = kTrainDuration;
    train_spec.num_channels = kExperimentChannels;
    SynthSpec eval_spec = train_spec;
    eval_spec.seed = 1001 + 2 * s;
    eval_spec.duration = kEvalDuration;
    const SynthCorpus tr = generate(train_spec), ev = generate(eval_spec);

    ExperimentOptions opt;
    opt.systems = systems;
    opt.train.seed = static_cast<std::uint64_t>(s);
    // One threshold per distinct score: the full-resolution curve.
    opt.det_thresholds = 1000000;
    const auto res = run_experiment({tr.record, tr.labels}, {ev.record, ev.labels}, FrontendConfig{}, opt);
    min_epochs = std::min(min_epochs, res[0].hypotheses.size());

    const double two1 = res[0].row.error_two, two2 = res[1].row.error_two, two5 = res[2].row.error_two;
    const bool a = two5 < two2 && two2 < two1;
    const bool b = res[3].row.error_six < res[2].row.error_six;
    int better = 0;
    for (int i = 0; i < kDetGridPoints; ++i) {
      const double p_fa =
          kDetGridLow * std::pow(kDetGridHigh / kDetGridLow, static_cast<double>(i) / (kDetGridPoints - 1));
      if (miss_rate_at(res[3].det, p_fa) < miss_rate_at(res[0].det, p_fa)) ++better;
    }
    const bool c = better >= kDetDominance * kDetGridPoints;
    ok_a += a;
    ok_b += b;
    ok_c += c;
    std::printf("  seed %d: 2-way %.1f%% / %.1f%% / %.1f%% (systems 1/2/5), 6-way %.1f%% / %.1f%% "
                "(systems 5/10), DET 10 below 1 at %d/%d points\n",
                s, 100 * two1, 100 * two2, 100 * two5, 100 * res[2].row.error_six,
                100 * res[3].row.error_six, better, kDetGridPoints);
    for (const auto& r : res) g_experiment_curves.push_back(r.det);
  }
  const bool pass = min_epochs >= kMinEvalEpochs && ok_a >= kRequiredSeeds &&
                    ok_b >= kRequiredSeeds && ok_c >= kRequiredSeeds;
  return {pass, format("(a) %d/5, (b) %d/5, (c) %d/5 seeds; %zu eval epochs per seed", ok_a, ok_b,
                       ok_c, min_epochs)};
}

// ---------------------------------------------------------------- 6

// Fraction of trials whose E_d argmax lies within (M-1)/2 frames of a single
// injected spike. Peak amplitudes are drawn from [lo, hi] uV over a background
// of the default synthetic RMS.
double spike_hit_rate(double lo, double hi) {
  const SynthSpec spec = SynthSpec::defaults();
  const EventParams& spsw = spec.event_params[class_index(Label::SPSW)];
  const FrontendConfig fe;
  const Index tolerance = (fe.diff.frames() - 1) / 2;
  int hits = 0;
  for (int trial = 0; trial < kSpikeTrials; ++trial) {
    std::mt19937_64 rng(6000 + trial);
    const auto n = static_cast<Index>(kSpikeRecord * spec.sample_rate);
    VectorXd x = pink_noise(n, 1.0, rng);
    highpass(x, spec.background_highpass, spec.sample_rate);
    x *= spec.background_rms / std::sqrt(x.squaredNorm() / static_cast<double>(n));
    std::uniform_real_distribution<double> when(2.0, kSpikeRecord - 2.0);
    std::uniform_real_distribution<double> amp(lo, hi);
    std::uniform_real_distribution<double> width(spsw.width.lo, spsw.width.hi);
    const double t = when(rng);
    const double sign = rng() % 2 ? 1.0 : -1.0;
    const double a = amp(rng);
    add_biphasic_pulse(x, t * spec.sample_rate, width(rng) * spec.sample_rate, sign * a);

    const ChannelAnalysis analysis = analyze_channel({"T3", spec.sample_rate, x}, fe);
    Index peak = 0;
    double best = -INFINITY;
    for (std::size_t i = 0; i < analysis.energies.size(); ++i) {
      if (analysis.energies[i].e_d > best) {
        best = analysis.energies[i].e_d;
        peak = static_cast<Index>(i);
      }
    }
    // The frame whose window is centred nearest the spike.
    const auto spike_frame = static_cast<Index>(std::lround((t - 0.1) / 0.1));
    hits += std::abs(peak - spike_frame) <= tolerance;
  }
  return static_cast<double>(hits) / kSpikeTrials;
}

Outcome spike_localisation() {
  const SynthSpec spec = SynthSpec::defaults();
  const double peak = kSpikeToBackground * spec.background_rms;
  const double rate = spike_hit_rate(peak, peak);
  const auto& range = spec.event_params[class_index(Label::SPSW)].amplitude;
  const double default_rate = spike_hit_rate(range.lo, range.hi);
  return {rate >= kSpikeHitRate,
          format("E_d argmax within %d frames in %.1f%% of %d trials at %.0fx background RMS "
                 "(%.1f%% across the default %.0f-%.0f uV spike range)",
                 static_cast<int>((FrontendConfig{}.diff.frames() - 1) / 2), 100 * rate, kSpikeTrials, kSpikeToBackground, 100 * default_rate, range.lo, range.hi)};
}

// ---------------------------------------------------------------- 7

Outcome format_round_trips() {
  testing::TempDir dir("acceptance");
  std::mt19937_64 rng(7);
  bool features_ok = true;
  for (int id = 1; id <= kNumSystems; ++id) {
    FeatureSequence seq;
    seq.system_id = id;
    seq.dim = feature_system(id).dim();
    seq.channel_name = "CH" + std::to_string(id);
    const Index T = 1 + static_cast<Index>(rng() % 300);
    seq.frames = testing::random_vector(rng, T * seq.dim, -1e4, 1e4).reshaped(T, seq.dim);
    write_features(seq, dir / "f.feat");
    const FeatureSequence back = read_features(dir / "f.feat");
    features_ok &= back.dim == seq.dim && back.system_id == id && back.channel_name == seq.channel_name &&
                   back.frames.rows() == T &&
                   (back.frames.cast<float>().array() == seq.frames.cast<float>().array()).all();
  }

  SynthSpec spec = SynthSpec::defaults();
  spec.seed = 7;
  spec.duration = 200.0;
  spec.num_channels = 4;
  spec.class_priors = {0.1, 0.2, 0.2, 0.1, 0.2, 0.2};
  const SynthCorpus corpus = generate(spec);
  const FrontendConfig fe;
  std::vector<FeatureSequence> feats;
  for (const auto& a : analyze_record(corpus.record, fe)) feats.push_back(extract_features(a, 5, fe.delta));
  TrainOptions opt;
  opt.num_mixtures = 2;
  const ModelSet models = train(collect_epochs(feats, corpus.labels), opt, 5);
  write_models(models, dir / "m.model");
  const ModelSet back = read_models(dir / "m.model");
  bool models_ok = back.dim == models.dim && back.system_id == models.system_id;
  for (std::size_t c = 0; c < kNumClasses && models_ok; ++c) {
    const auto& x = models.models[c];
    const auto& y = back.models[c];
    models_ok &= x.class_label == y.class_label && x.num_states() == y.num_states() &&
                 (x.transitions.array() == y.transitions.array()).all();
    for (int s = 0; s < x.num_states() && models_ok; ++s) {
      models_ok &= (x.states[s].weights.array() == y.states[s].weights.array()).all() &&
                   (x.states[s].means.array() == y.states[s].means.array()).all() &&
                   (x.states[s].variances.array() == y.states[s].variances.array()).all();
    }
  }

  // physical = pmin + (d - dmin) * (pmax - pmin) / (dmax - dmin), worked by
  // hand for pmin -200, pmax 200, dmin -2048, dmax 2047.
  testing::EdfSignal sig;
  sig.label = "EEG C3-REF";
  sig.physical_min = -200.0;
  sig.physical_max = 200.0;
  sig.digital_min = -2048;
  sig.digital_max = 2047;
  sig.samples_per_record = 5;
  sig.data = {-2048, 2047, 0, -1, 1000};
  const double want[] = {-200.0, 200.0, 0.04884004884, -0.04884004884, 97.72893772894};
  testing::write_bytes(dir / "fixture.edf", testing::build_edf({sig}, 1, 0.02));
  const SignalRecord rec = read_edf_signal(dir / "fixture.edf");
  double edf_err = INFINITY;
  if (rec.channels.size() == 1 && rec.channels[0].samples.size() == 5) {
    edf_err = 0.0;
    for (Index i = 0; i < 5; ++i) edf_err = std::max(edf_err, std::abs(rec.channels[0].samples(i) - want[i]));
  }
  const bool edf_ok = edf_err < kEdfTol && rec.channels[0].sample_rate == 250.0;
  return {features_ok && models_ok && edf_ok,
          format("features %s, models %s, EDF max err %.2e uV", features_ok ? "exact" : "differ",
                 models_ok ? "exact" : "differ", edf_err)};
}

// ---------------------------------------------------------------- 8

bool monotone(const std::vector<DETPoint>& curve) {
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (!(curve[i].threshold > curve[i - 1].threshold) ||
        curve[i].p_detection > curve[i - 1].p_detection ||
        curve[i].p_false_alarm > curve[i - 1].p_false_alarm) {
      return false;
    }
  }
  return true;
}

Outcome evaluation_invariants() {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  int order_violations = 0, non_monotone = 0, curves = 0;
  for (int trial = 0; trial < kParadigmSets; ++trial) {
    const Index n = 20 + static_cast<Index>(rng() % 200);
    std::vector<EpochHypothesis> hyps;
    std::vector<EpochReference> refs;
    for (Index e = 0; e < n; ++e) {
      EpochHypothesis h;
      h.channel_name = "C" + std::to_string(e % 3);
      h.epoch_index = e;
      h.hypothesis = kAllClasses[rng() % kNumClasses];
      h.score = gauss(rng);
      hyps.push_back(h);
      refs.push_back({h.channel_name, e, kAllClasses[rng() % kNumClasses]});
    }
    const double e6 = error_rate(hyps, refs, Paradigm::six);
    const double e4 = error_rate(hyps, refs, Paradigm::four);
    const double e2 = error_rate(hyps, refs, Paradigm::two);
    order_violations += !(e2 <= e4 && e4 <= e6);
    bool has_targ = false, has_bckg = false;
    for (const auto& r : refs) (is_target_class(r.label) ? has_targ : has_bckg) = true;
    if (has_targ && has_bckg) {
      non_monotone += !monotone(det_curve(hyps, refs, 2 + static_cast<int>(rng() % 300)));
      ++curves;
    }
  }
  for (const auto& c : g_experiment_curves) {
    non_monotone += !monotone(c);
    ++curves;
  }

  std::vector<EpochHypothesis> hyps;
  std::vector<EpochReference> refs;
  for (Index e = 0; e < kDiagonalSamples; ++e) {
    EpochHypothesis h;
    h.channel_name = "A";
    h.epoch_index = e;
    h.score = gauss(rng);
    hyps.push_back(h);
    refs.push_back({"A", e, e % 2 ? Label::PLED : Label::EYEM});
  }
  double gap = 0.0;
  for (const auto& p : det_curve(hyps, refs, 1000000)) {
    gap = std::max(gap, std::abs(p.p_detection - p.p_false_alarm));
  }
  return {order_violations == 0 && non_monotone == 0 && gap < kDiagonalTol,
          format("paradigm order violations %d/%d; non-monotone curves %d/%d; diagonal gap %.3f",
                 order_violations, kParadigmSets, non_monotone, curves, gap)};
}

// ---------------------------------------------------------------- 9

Outcome performance() {
  std::mt19937_64 rng(9);
  const double rate = 250.0;
  const Channel ch{"C3", rate, pink_noise(static_cast<Index>(kPerformanceSignal * rate), 10.0, rng)};
  const FrontendConfig fe;
  const auto start = std::chrono::steady_clock::now();
  const FeatureSequence seq = extract_features(analyze_channel(ch, fe), 15, fe.delta);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double factor = kPerformanceSignal / seconds;
  return {factor >= kRealTimeFactor && seq.frame_count() == 35999,
          format("1 h of signal in %.2f s (%.0fx real time)", seconds, factor)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"dimension ledger", dimension_ledger},
      {"delta regression exactness", delta_exactness},
      {"energy oracles", energy_oracles},
      {"HMM correctness", hmm_correctness},
      {"synthetic system ordering", synthetic_ordering},
      {"differential energy localises spikes", spike_localisation},
      {"format round trips", format_round_trips},
      {"evaluation invariants", evaluation_invariants},
      {"feature extraction speed", performance},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
