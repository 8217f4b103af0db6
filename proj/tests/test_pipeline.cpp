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

#include <cmath>
#include <random>

#include "doctest.h"
#include "eegfeat/pipeline.hpp"
#include "eegfeat/synth.hpp"
#include "test_support.hpp"

using namespace eegfeat;

namespace {

Channel noise_channel(const std::string& name, double rate, double seconds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return {name, rate, pink_noise(static_cast<Index>(rate * seconds), 10.0, rng)};
}

// Large, well-separated events on a quiet background.
SynthSpec separated(std::uint64_t seed, double duration, int channels) {
  SynthSpec s = SynthSpec::defaults();
  s.seed = seed;
  s.duration = duration;
  s.num_channels = channels;
  s.class_priors = {0.15, 0.15, 0.15, 0.15, 0.15, 0.25};
  s.background_rms = 5.0;
  s.train_taper = 0.0;
  auto& p = s.event_params;
  p[class_index(Label::SPSW)].amplitude = {60, 80};
  p[class_index(Label::SPSW)].width = {0.04, 0.06};
  p[class_index(Label::GPED)].amplitude = {60, 80};
  p[class_index(Label::PLED)].amplitude = {60, 80};
  p[class_index(Label::EYEM)].amplitude = {80, 120};
  p[class_index(Label::ARTF)].amplitude = {40, 60};
  return s;
}

}  // namespace

TEST_CASE("one minute of signal gives 599 frames") {
  const FrontendConfig cfg;
  const ChannelAnalysis a = analyze_channel(noise_channel("C3", 250.0, 60.0, 1), cfg);
  CHECK(a.channel_name == "C3");
  REQUIRE(a.cepstra.rows() == 599);
  CHECK(a.cepstra.cols() == 7);
  CHECK(a.energies.size() == 599);
  CHECK(a.cepstra.allFinite());

  const FeatureSequence s5 = extract_features(a, 5, cfg.delta);
  CHECK(s5.frame_count() == 599);
  CHECK(s5.dim == 9);
  CHECK(s5.channel_name == "C3");
  CHECK(s5.frame_period == 0.1);
  CHECK(epochs(s5).size() == 59);
  const FeatureSequence s16 = extract_features(a, 16, cfg.delta);
  CHECK(s16.frame_count() == 599);
  CHECK(s16.dim == 26);
  CHECK(s16.frames.allFinite());

  // A 500 Hz recording is brought to the same frame grid.
  const ChannelAnalysis b = analyze_channel(noise_channel("C4", 500.0, 60.0, 2), cfg);
  CHECK(b.cepstra.rows() == 599);
}

TEST_CASE("record analysis matches per-channel analysis") {
  SignalRecord rec;
  for (int c = 0; c < 4; ++c) rec.channels.push_back(noise_channel("CH" + std::to_string(c), 250.0, 20.0, 10 + c));
  const FrontendConfig cfg;
  const auto all = analyze_record(rec, cfg);
  REQUIRE(all.size() == 4);
  for (int c = 0; c < 4; ++c) {
    const auto one = analyze_channel(rec.channels[c], cfg);
    CHECK(all[c].channel_name == rec.channels[c].name);
    CHECK((all[c].cepstra.array() == one.cepstra.array()).all());
    for (std::size_t t = 0; t < one.energies.size(); ++t) {
      REQUIRE(all[c].energies[t].e_d == one.energies[t].e_d);
    }
  }

  rec.channels.push_back(noise_channel("short", 250.0, 0.1, 3));
  CHECK_THROWS_AS(analyze_record(rec, cfg), DataError);
}

TEST_CASE("front end configuration keys") {
  Config c;
  c.set("frontend.num_filters", "24");
  c.set("energy.diff_window_dur", "1.5");
  c.set("delta.n_first", "4");
  const FrontendConfig f = FrontendConfig::from_config(c);
  CHECK(f.bank.num_filters == 24);
  CHECK(f.diff.frames() == 15);
  CHECK(f.delta.n_first == 4);
  CHECK(f.bank.high_freq == 125.0);

  c.set("frontend.window_dur", "0.05");
  c.set("frontend.step_dur", "0.1");
  CHECK_THROWS_AS(FrontendConfig::from_config(c), ConfigError);
}

TEST_CASE("epochs are grouped by their reference class") {
  FeatureSequence seq;
  seq.system_id = 1;
  seq.dim = 7;
  seq.channel_name = "F3";
  seq.frames = FeatureMatrix::Zero(45, 7);
  for (Index t = 0; t < 45; ++t) seq.frames(t, 0) = static_cast<double>(t);
  const std::vector<EventLabel> labels = {{"F3", 1.0, 3.0, Label::PLED}, {"F3", 3.2, 4.0, Label::ARTF}};
  const auto refs = epoch_references({seq}, labels);
  REQUIRE(refs.size() == 4);
  CHECK(refs[0].label == Label::BCKG);
  CHECK(refs[1].label == Label::PLED);
  CHECK(refs[2].label == Label::PLED);
  CHECK(refs[3].label == Label::ARTF);

  const EpochSets sets = collect_epochs({seq}, labels);
  CHECK(sets[class_index(Label::PLED)].size() == 2);
  CHECK(sets[class_index(Label::ARTF)].size() == 1);
  CHECK(sets[class_index(Label::BCKG)].size() == 1);
  CHECK(sets[class_index(Label::PLED)][1](0, 0) == 20.0);
}

TEST_CASE("separable synthetic corpus is classified accurately") {
  const SynthCorpus train_corpus = generate(separated(2, 300.0, 4));
  const SynthCorpus eval_corpus = generate(separated(3, 120.0, 4));
  ExperimentOptions opt;
  opt.systems = {5};
  opt.train.seed = 1;
  const auto results = run_experiment({train_corpus.record, train_corpus.labels},
                                      {eval_corpus.record, eval_corpus.labels}, FrontendConfig{}, opt);
  REQUIRE(results.size() == 1);
  const SystemResult& r = results[0];
  CHECK(r.hypotheses.size() == 4 * 119);
  CHECK(r.references.size() == r.hypotheses.size());
  CHECK(r.row.system_id == 5);
  CHECK(r.row.dims == 9);
  MESSAGE("6-way error " << r.row.error_six);
  CHECK(1.0 - r.row.error_six >= 0.90);
  CHECK(r.row.error_two <= r.row.error_four);
  CHECK(r.row.error_four <= r.row.error_six);
  CHECK(r.det.front().p_detection == 1.0);
  CHECK(r.det.back().p_detection == 0.0);

  opt.systems = {};
  CHECK_THROWS_AS(run_experiment({train_corpus.record, train_corpus.labels},
                                 {eval_corpus.record, eval_corpus.labels}, FrontendConfig{}, opt),
                  ConfigError);
}

TEST_CASE("experiment reports the failing stage") {
  const SynthCorpus corpus = generate(separated(4, 30.0, 1));
  ExperimentOptions opt;
  opt.systems = {1};
  try {
    run_experiment({corpus.record, corpus.labels}, {corpus.record, corpus.labels}, FrontendConfig{}, opt);
    FAIL("expected a training error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("train stage: insufficient training data", 0) == 0);
  }
}
