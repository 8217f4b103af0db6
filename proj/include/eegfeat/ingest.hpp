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

#ifndef EEGFEAT_INGEST_HPP
#define EEGFEAT_INGEST_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "eegfeat/common.hpp"

namespace eegfeat {

struct Channel {
  std::string name;
  double sample_rate = 0.0;  // Hz
  VectorXd samples;          // microvolts
};

struct SignalRecord {
  std::string record_id;
  std::vector<Channel> channels;

  /// Throws DataError if a channel is empty, has a non-positive rate, or
  /// shares its name with another channel.
  void validate() const;
};

// CSV layout:
//   # sample_rate=250
//   time,FP1,FP2
//   0,1.5,-2.25
//   ...
SignalRecord read_csv_signal(const std::filesystem::path& path);

/// All channels must share one sample rate. Values are written with
/// binary32 round-trip precision.
void write_csv_signal(const SignalRecord& record,
                      const std::filesystem::path& path);

/// Continuous EDF only. Annotation signals are skipped with a warning on
/// std::clog.
SignalRecord read_edf_signal(const std::filesystem::path& path);

/// Dispatches on extension: `.edf` (any case) is EDF, everything else CSV.
SignalRecord read_signal(const std::filesystem::path& path);

struct ResampleSpec {
  double target_rate = 250.0;
  int filter_taps = 127;
  double kaiser_beta = 8.6;

  void validate() const;
};

/// Kaiser-windowed sinc resampler, polyphase for rational ratios, with
/// reflected edges. Identity (bit-exact copy) when the rates already match.
Channel resample(const Channel& channel, const ResampleSpec& spec);

SignalRecord resample(const SignalRecord& record, const ResampleSpec& spec);

}  // namespace eegfeat

#endif  // EEGFEAT_INGEST_HPP
