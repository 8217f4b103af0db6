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

// eegfeat: synth -> features -> train -> classify -> score/det, plus an
// end-to-end experiment runner that prints a per-system error table.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "eegfeat/pipeline.hpp"
#include "eegfeat/synth.hpp"

namespace fs = std::filesystem;
using namespace eegfeat;

namespace {

Config load_config(const std::string& path) {
  return path.empty() ? Config{} : Config::load(path);
}

std::vector<fs::path> feature_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.path().extension() == ".feat") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  if (out.empty()) throw Error("no feature files given");
  return out;
}

std::vector<FeatureSequence> load_features(const std::vector<std::string>& inputs) {
  std::vector<FeatureSequence> seqs;
  for (const auto& p : feature_files(inputs)) seqs.push_back(read_features(p));
  return seqs;
}

std::vector<EpochReference> refs_for(const std::vector<EpochHypothesis>& hyps,
                                     const std::vector<EventLabel>& labels) {
  std::map<std::string, Index> grid;
  for (const auto& h : hyps) grid[h.channel_name] = std::max(grid[h.channel_name], h.epoch_index + 1);
  return label_to_epochs(labels, grid);
}

std::vector<int> parse_systems(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_long(item, "--systems")));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG cepstral features, differential energy and GMM-HMM epoch classification"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic EEG corpus");
  std::string synth_signal, synth_labels;
  double synth_duration = 0;
  int synth_channels = 0;
  synth->add_option("--config", config_path, "key=value config file");
  synth->add_option("--seed", seed, "Corpus seed")->each([&](const std::string&) { seed_given = true; });
  synth->add_option("--duration", synth_duration, "Seconds per channel");
  synth->add_option("--channels", synth_channels, "Number of channels");
  synth->add_option("--signal-out", synth_signal, "Output signal CSV")->required();
  synth->add_option("--labels-out", synth_labels, "Output label CSV")->required();

  // features
  auto* features = app.add_subcommand("features", "Extract one FEATv1 file per channel");
  std::string feat_input, feat_out_dir;
  int system_id = 15;
  features->add_option("--input", feat_input, "Signal file (.csv or .edf)")->required();
  features->add_option("--system", system_id, "Feature system 1..16")->check(CLI::Range(1, 16));
  features->add_option("--config", config_path, "key=value config file");
  features->add_option("--out-dir", feat_out_dir, "Output directory")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "Train one GMM-HMM per class");
  std::vector<std::string> train_inputs;
  std::string train_labels, model_out;
  TrainOptions topt;
  train_cmd->add_option("--features", train_inputs, "Feature files or directories")->required();
  train_cmd->add_option("--labels", train_labels, "Label CSV")->required();
  train_cmd->add_option("--states", topt.num_states, "States per model");
  train_cmd->add_option("--mixtures", topt.num_mixtures, "Gaussians per state");
  train_cmd->add_option("--seed", topt.seed, "Training seed");
  train_cmd->add_option("--model", model_out, "Output model file")->required();

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Score every epoch against the class models");
  std::string model_in, hyps_out;
  std::vector<std::string> classify_inputs;
  classify_cmd->add_option("--model", model_in, "Model file")->required();
  classify_cmd->add_option("--features", classify_inputs, "Feature files or directories")->required();
  classify_cmd->add_option("--out", hyps_out, "Output hypotheses CSV")->required();

  // score
  auto* score_cmd = app.add_subcommand("score", "6/4/2-way epoch error rates");
  std::string hyps_in, ref_labels;
  score_cmd->add_option("--hyps", hyps_in, "Hypotheses CSV")->required();
  score_cmd->add_option("--labels", ref_labels, "Reference label CSV")->required();

  // det
  auto* det_cmd = app.add_subcommand("det", "Two-way DET curve");
  std::string det_out;
  int det_thresholds = 200;
  det_cmd->add_option("--hyps", hyps_in, "Hypotheses CSV")->required();
  det_cmd->add_option("--labels", ref_labels, "Reference label CSV")->required();
  det_cmd->add_option("--thresholds", det_thresholds, "Number of thresholds");
  det_cmd->add_option("--out", det_out, "Output DET CSV")->required();

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Train and score several feature systems");
  std::string tr_sig, tr_lab, ev_sig, ev_lab, exp_out_dir, systems_list = "1,5,10,15";
  TrainOptions eopt;
  exp_cmd->add_option("--train-signal", tr_sig)->required();
  exp_cmd->add_option("--train-labels", tr_lab)->required();
  exp_cmd->add_option("--eval-signal", ev_sig)->required();
  exp_cmd->add_option("--eval-labels", ev_lab)->required();
  exp_cmd->add_option("--systems", systems_list, "Comma-separated system ids");
  exp_cmd->add_option("--states", eopt.num_states);
  exp_cmd->add_option("--mixtures", eopt.num_mixtures);
  exp_cmd->add_option("--seed", eopt.seed, "Training seed");
  exp_cmd->add_option("--thresholds", det_thresholds, "DET thresholds");
  exp_cmd->add_option("--config", config_path, "key=value config file");
  exp_cmd->add_option("--out-dir", exp_out_dir, "Report and DET output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      Config cfg = load_config(config_path);
      if (seed_given) cfg.set("synth.seed", std::to_string(seed));
      if (synth_duration > 0) cfg.set("synth.duration", std::to_string(synth_duration));
      if (synth_channels > 0) cfg.set("synth.channels", std::to_string(synth_channels));
      const auto corpus = generate(SynthSpec::from_config(cfg));
      write_csv_signal(corpus.record, synth_signal);
      write_labels(corpus.labels, synth_labels);
      std::cout << "wrote " << corpus.record.channels.size() << " channels, "
                << corpus.labels.size() << " labels\n";
    } else if (*features) {
      const auto cfg = FrontendConfig::from_config(load_config(config_path));
      const auto record = read_signal(feat_input);
      fs::create_directories(feat_out_dir);
      for (const auto& a : analyze_record(record, cfg)) {
        const auto seq = extract_features(a, system_id, cfg.delta);
        const fs::path out = fs::path(feat_out_dir) / (a.channel_name + ".feat");
        write_features(seq, out);
        std::cout << out.string() << ": " << seq.frame_count() << " frames x " << seq.dim << "\n";
      }
    } else if (*train_cmd) {
      const auto seqs = load_features(train_inputs);
      const auto set = train(collect_epochs(seqs, read_labels(train_labels)), topt,
                             seqs.front().system_id);
      write_models(set, model_out);
      std::cout << "wrote " << model_out << "\n";
    } else if (*classify_cmd) {
      const auto models = read_models(model_in);
      const auto hyps = classify_all(models, load_features(classify_inputs));
      write_hypotheses(hyps, hyps_out);
      std::cout << "wrote " << hyps.size() << " epoch hypotheses\n";
    } else if (*score_cmd) {
      const auto hyps = read_hypotheses(hyps_in);
      const auto refs = refs_for(hyps, read_labels(ref_labels));
      for (auto p : {Paradigm::six, Paradigm::four, Paradigm::two}) {
        std::printf("%s error: %.2f%%\n", std::string(to_string(p)).c_str(),
                    100.0 * error_rate(hyps, refs, p));
      }
    } else if (*det_cmd) {
      const auto hyps = read_hypotheses(hyps_in);
      write_det_csv(det_curve(hyps, refs_for(hyps, read_labels(ref_labels)), det_thresholds), det_out);
      std::cout << "wrote " << det_out << "\n";
    } else if (*exp_cmd) {
      const auto cfg = FrontendConfig::from_config(load_config(config_path));
      const Corpus train_corpus{read_signal(tr_sig), read_labels(tr_lab)};
      const Corpus eval_corpus{read_signal(ev_sig), read_labels(ev_lab)};
      ExperimentOptions opt;
      opt.systems = parse_systems(systems_list);
      opt.train = eopt;
      opt.det_thresholds = det_thresholds;
      const auto results = run_experiment(train_corpus, eval_corpus, cfg, opt);
      fs::create_directories(exp_out_dir);
      std::vector<ScoreRow> rows;
      for (const auto& r : results) {
        rows.push_back(r.row);
        write_det_csv(r.det, fs::path(exp_out_dir) / ("det_system" + std::to_string(r.row.system_id) + ".csv"));
      }
      const std::string report = format_report(rows);
      std::ofstream(fs::path(exp_out_dir) / "report.txt") << report;
      std::cout << report;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
