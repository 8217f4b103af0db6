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

#ifndef EEGFEAT_SYNTH_HPP
#define EEGFEAT_SYNTH_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "eegfeat/common.hpp"
#include "eegfeat/config.hpp"
#include "eegfeat/eval.hpp"
#include "eegfeat/ingest.hpp"

namespace eegfeat {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Per-class waveform parameters. Amplitudes are microvolts at unit channel
// gain: the transient peak for SPSW/GPED/PLED, the deflection peak for EYEM
// and the burst RMS for ARTF. `duration` is the labelled segment length and
// is rounded to whole epochs. `width` is the transient (or burst) length.
struct EventParams {
  Range amplitude;
  Range duration;
  Range rate;   // Hz, periodic classes only
  Range width;  // s
};

struct SynthSpec {
  std::uint64_t seed = 1;
  double duration = 600.0;               // s per channel
  int num_channels = 4;
  double sample_rate = 250.0;
  double background_rms = 10.0;          // uV at unit gain
  double gain_spread = 1.0;              // channel gain is log-uniform in [1/g, g]
  double period_jitter = 0.1;            // relative jitter of discharge intervals
  double background_highpass = 0.5;      // Hz, one-pole DC blocker on the noise
  double modulation_depth = 0.15;        // slow log-amplitude swing of the background
  double train_envelope_depth = 0.8;     // slow amplitude swing of discharge trains
  Range train_envelope_period{2.0, 4.0}; // s
  double train_taper = 0.5;              // s, onset and offset ramp of discharge trains
  std::array<double, kNumClasses> class_priors{};  // fraction of time per class
  std::array<EventParams, kNumClasses> event_params{};

  /// Priors from the annotated training-set event counts.
  static SynthSpec defaults();
  /// Keys `synth.<field>`, `synth.prior.<CLASS>` and
  /// `synth.<CLASS>.{amplitude,duration,rate,width}` override `defaults()`.
  static SynthSpec from_config(const Config& config);

  void validate() const;
};

struct Transient {
  int channel = 0;
  double time = 0.0;  // s, peak of the transient or deflection
  Label label = Label::BCKG;
};

struct SynthCorpus {
  SignalRecord record;
  std::vector<EventLabel> labels;   // every segment, background included
  std::vector<Transient> transients;
};

SynthCorpus generate(const SynthSpec& spec);

/// 1/f-shaped Gaussian noise scaled to the given RMS.
VectorXd pink_noise(Index n, double rms, std::mt19937_64& rng);

/// First-order high-pass with the given corner frequency, in place.
void highpass(VectorXd& x, double corner_hz, double sample_rate);

/// Adds amplitude * (derivative-of-Gaussian pulse) peaking at |amplitude|,
/// with its zero crossing at `center` samples. The pulse spans `width` s.
void add_biphasic_pulse(VectorXd& x, double center, double width_samples, double amplitude);

}  // namespace eegfeat

#endif  // EEGFEAT_SYNTH_HPP
