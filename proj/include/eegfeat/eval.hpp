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

#ifndef EEGFEAT_EVAL_HPP
#define EEGFEAT_EVAL_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eegfeat/common.hpp"
#include "eegfeat/models.hpp"

namespace eegfeat {

enum class Paradigm { six, four, two };

std::string_view to_string(Paradigm p);

/// six: identity. four: EYEM/ARTF/BCKG -> BCKG. two: SPSW/GPED/PLED -> TARG,
/// the rest -> BCKG. Throws for labels outside the six event classes.
Label collapse(Label label, Paradigm paradigm);

struct EventLabel {
  std::string channel_name;
  double start_time = 0.0;  // s
  double stop_time = 0.0;   // s
  Label label = Label::BCKG;
};

/// CSV `channel,start,stop,label`; a header row with those names is optional.
std::vector<EventLabel> read_labels(const std::filesystem::path& path);
void write_labels(const std::vector<EventLabel>& labels, const std::filesystem::path& path);

struct EpochReference {
  std::string channel_name;
  Index epoch_index = 0;
  Label label = Label::BCKG;
};

/// Epoch e of a channel spans [e, e+1) seconds. It takes the label with the
/// largest total overlap; ties go to the rarer class and epochs with no
/// overlapping label are BCKG.
std::vector<EpochReference> label_to_epochs(const std::vector<EventLabel>& labels,
                                            const std::map<std::string, Index>& epochs_per_channel,
                                            double epoch_dur = 1.0);

/// Fraction of epochs whose collapsed hypothesis differs from the collapsed
/// reference. Hypotheses and references must cover the same cells.
double error_rate(const std::vector<EpochHypothesis>& hyps,
                  const std::vector<EpochReference>& refs, Paradigm paradigm);

struct DETPoint {
  double threshold = 0.0;
  double p_detection = 0.0;
  double p_false_alarm = 0.0;
};

/// Sweeps a threshold over the hypothesis scores. Thresholds are the
/// distinct scores when there are at most `num_thresholds` of them, otherwise
/// `num_thresholds` evenly spaced values across the score range; a point
/// just below the minimum and one just above the maximum bracket the sweep.
/// Points are ordered by increasing threshold.
std::vector<DETPoint> det_curve(const std::vector<EpochHypothesis>& hyps,
                                const std::vector<EpochReference>& refs, int num_thresholds);

/// Miss probability at a false-alarm budget: 1 - max p_detection over the
/// points with p_false_alarm <= p_fa.
double miss_rate_at(const std::vector<DETPoint>& curve, double p_fa);

/// Inverse standard normal CDF; p is clamped to [1e-6, 1 - 1e-6].
double normal_deviate(double p);

/// CSV `threshold,p_fa,p_det,dev_fa,dev_det`.
void write_det_csv(const std::vector<DETPoint>& curve, const std::filesystem::path& path);

/// CSV `channel,epoch,hypothesis,score,ll_SPSW,...,ll_BCKG`.
void write_hypotheses(const std::vector<EpochHypothesis>& hyps, const std::filesystem::path& path);
std::vector<EpochHypothesis> read_hypotheses(const std::filesystem::path& path);

struct ScoreRow {
  int system_id = 0;
  std::string description;
  int dims = 0;
  double error_six = 0.0;
  double error_four = 0.0;
  double error_two = 0.0;
};

/// Aligned-column table: No., System Description, Dims., 6-Way, 4-Way, 2-Way.
std::string format_report(const std::vector<ScoreRow>& rows);

}  // namespace eegfeat

#endif  // EEGFEAT_EVAL_HPP
