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

#include "eegfeat/pipeline.hpp"

#include <future>
#include <map>

namespace eegfeat {

FrontendConfig FrontendConfig::from_config(const Config& c) {
  FrontendConfig f;
  f.resample.target_rate = c.get_double("resample.target_rate", f.resample.target_rate);
  f.resample.filter_taps = static_cast<int>(c.get_int("resample.filter_taps", f.resample.filter_taps));
  f.resample.kaiser_beta = c.get_double("resample.kaiser_beta", f.resample.kaiser_beta);
  f.frame.sample_rate = f.resample.target_rate;
  f.frame.window_dur = c.get_double("frontend.window_dur", f.frame.window_dur);
  f.frame.step_dur = c.get_double("frontend.step_dur", f.frame.step_dur);
  f.frame.window_function =
      parse_window_function(c.get_string("frontend.window_function", "hamming"));
  f.bank.num_filters = static_cast<int>(c.get_int("frontend.num_filters", f.bank.num_filters));
  f.bank.fft_size = static_cast<int>(c.get_int("frontend.fft_size", f.bank.fft_size));
  f.bank.low_freq = c.get_double("frontend.low_freq", f.bank.low_freq);
  f.bank.high_freq = c.get_double("frontend.high_freq", f.resample.target_rate / 2.0);
  f.log_floor = c.get_double("frontend.log_floor", f.log_floor);
  f.diff.window_dur = c.get_double("energy.diff_window_dur", f.diff.window_dur);
  f.diff.step_dur = f.frame.step_dur;
  f.energy_floor = c.get_double("energy.floor", f.energy_floor);
  f.delta.n_first = static_cast<int>(c.get_int("delta.n_first", f.delta.n_first));
  f.delta.n_second = static_cast<int>(c.get_int("delta.n_second", f.delta.n_second));
  f.validate();
  return f;
}

void FrontendConfig::validate() const {
  resample.validate();
  frame.validate();
  if (frame.sample_rate != resample.target_rate) {
    throw ConfigError("frame sample rate must equal the resampling target rate");
  }
  bank.validate(frame.sample_rate, frame.window_samples());
  diff.validate();
  delta.validate();
  if (!(log_floor > 0.0) || !(energy_floor > 0.0)) throw ConfigError("log floors must be positive");
}

ChannelAnalysis analyze_channel(const Channel& channel, const FrontendConfig& config) {
  config.validate();
  const Channel ch = resample(channel, config.resample);
  const FeatureMatrix frames = frame_signal(ch.samples, config.frame);
  const FilterBank bank(config.bank, config.frame.sample_rate);
  SpectrumAnalyzer analyzer(bank);
  const auto basis = cepstral_basis(config.bank.num_filters);

  const Index T = frames.rows();
  ChannelAnalysis out;
  out.channel_name = channel.name;
  out.cepstra.resize(T, kNumCepstra);
  out.energies.resize(T);
  VectorXd e_f(T);
  for (Index t = 0; t < T; ++t) {
    const SpectralFrame sf = analyzer(frames.row(t).transpose());
    const VectorXd logs = sf.filter_outputs.cwiseMax(config.log_floor).array().log().matrix();
    out.cepstra.row(t) = (basis * logs).transpose();
    out.energies[t].e_t = time_energy(frames.row(t), config.energy_floor);
    out.energies[t].e_f = freq_energy(sf, config.energy_floor);
    e_f[t] = out.energies[t].e_f;
  }
  const VectorXd e_d = diff_energy(e_f, config.diff);
  for (Index t = 0; t < T; ++t) out.energies[t].e_d = e_d[t];
  return out;
}

std::vector<ChannelAnalysis> analyze_record(const SignalRecord& record,
                                            const FrontendConfig& config) {
  config.validate();
  std::vector<std::future<ChannelAnalysis>> jobs;
  jobs.reserve(record.channels.size());
  for (const auto& ch : record.channels) {
    jobs.push_back(std::async(std::launch::async,
                              [&ch, &config] { return analyze_channel(ch, config); }));
  }
  std::vector<ChannelAnalysis> out;
  std::exception_ptr error;
  for (auto& j : jobs) {
    try {
      out.push_back(j.get());
    } catch (...) {
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

FeatureSequence extract_features(const ChannelAnalysis& analysis, int system_id,
                                 const DeltaSpec& delta) {
  FeatureSequence seq =
      assemble(analysis.cepstra, analysis.energies, feature_system(system_id), delta);
  seq.channel_name = analysis.channel_name;
  return seq;
}

std::vector<EpochReference> epoch_references(const std::vector<FeatureSequence>& features,
                                             const std::vector<EventLabel>& labels) {
  std::map<std::string, Index> grid;
  for (const auto& f : features) grid[f.channel_name] = f.frame_count() / kFramesPerEpoch;
  return label_to_epochs(labels, grid);
}

EpochSets collect_epochs(const std::vector<FeatureSequence>& features,
                         const std::vector<EventLabel>& labels) {
  const auto refs = epoch_references(features, labels);
  std::map<std::pair<std::string, Index>, Label> ref_map;
  for (const auto& r : refs) ref_map[{r.channel_name, r.epoch_index}] = r.label;
  EpochSets sets;
  for (const auto& f : features) {
    auto segs = epochs(f);
    for (std::size_t e = 0; e < segs.size(); ++e) {
      const Label l = ref_map.at({f.channel_name, static_cast<Index>(e)});
      sets[class_index(l)].push_back(std::move(segs[e]));
    }
  }
  return sets;
}

std::vector<EpochHypothesis> classify_all(const ModelSet& models,
                                          const std::vector<FeatureSequence>& features) {
  std::vector<std::future<std::vector<EpochHypothesis>>> jobs;
  for (const auto& f : features) {
    jobs.push_back(std::async(std::launch::async, [&models, &f] { return classify(models, f); }));
  }
  std::vector<EpochHypothesis> out;
  std::exception_ptr error;
  for (auto& j : jobs) {
    try {
      auto h = j.get();
      out.insert(out.end(), std::make_move_iterator(h.begin()), std::make_move_iterator(h.end()));
    } catch (...) {
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<SystemResult> run_experiment(const Corpus& train_corpus, const Corpus& eval_corpus,
                                         const FrontendConfig& frontend,
                                         const ExperimentOptions& options) {
  if (options.systems.empty()) throw ConfigError("experiment: no systems requested");
  for (int id : options.systems) feature_system(id);

  std::vector<ChannelAnalysis> train_analysis, eval_analysis;
  try {
    train_analysis = analyze_record(train_corpus.record, frontend);
    eval_analysis = analyze_record(eval_corpus.record, frontend);
  } catch (const Error& e) {
    throw Error(std::string("features stage: ") + e.what());
  }

  std::vector<SystemResult> results;
  for (int id : options.systems) {
    std::vector<FeatureSequence> train_feats, eval_feats;
    for (const auto& a : train_analysis) train_feats.push_back(extract_features(a, id, frontend.delta));
    for (const auto& a : eval_analysis) eval_feats.push_back(extract_features(a, id, frontend.delta));

    const auto eval_refs = epoch_references(eval_feats, eval_corpus.labels);
    if (eval_refs.empty()) throw DataError("no epochs to score");

    SystemResult r;
    try {
      r.models = train(collect_epochs(train_feats, train_corpus.labels), options.train, id);
    } catch (const Error& e) {
      throw Error(std::string("train stage: ") + e.what());
    }
    std::vector<EpochHypothesis> hyps;
    try {
      hyps = classify_all(r.models, eval_feats);
    } catch (const Error& e) {
      throw Error(std::string("classify stage: ") + e.what());
    }
    const auto& cfg = feature_system(id);
    r.row = {id, cfg.description(), cfg.dim(), error_rate(hyps, eval_refs, Paradigm::six),
             error_rate(hyps, eval_refs, Paradigm::four), error_rate(hyps, eval_refs, Paradigm::two)};
    r.det = det_curve(hyps, eval_refs, options.det_thresholds);
    r.hypotheses = std::move(hyps);
    r.references = eval_refs;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace eegfeat
