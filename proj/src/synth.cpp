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

#include "eegfeat/synth.hpp"

#include <algorithm>
#include <cmath>

namespace eegfeat {

namespace {

constexpr std::array<const char*, 19> kChannelNames = {
    "FP1", "FP2", "F3", "F4", "C3", "C4", "P3", "P4", "O1", "O2",
    "F7",  "F8",  "T3", "T4", "T5", "T6", "FZ", "CZ", "PZ"};

std::string channel_name(int i) {
  if (i < static_cast<int>(kChannelNames.size())) return kChannelNames[i];
  return "CH" + std::to_string(i + 1);
}

double uniform(std::mt19937_64& rng, const Range& r) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

int segment_epochs(double drawn) { return std::max(1, static_cast<int>(std::lround(drawn))); }

// Mean segment length in whole epochs under the rounding rule above.
double expected_epochs(const Range& r) {
  if (r.lo == r.hi) return segment_epochs(r.lo);
  constexpr int kSteps = 2000;
  double acc = 0.0;
  for (int i = 0; i < kSteps; ++i) {
    acc += segment_epochs(r.lo + (r.hi - r.lo) * (i + 0.5) / kSteps);
  }
  return acc / kSteps;
}

Range parse_range(const Config& cfg, const std::string& key, Range fallback) {
  const auto v = cfg.get_doubles(key, {fallback.lo, fallback.hi});
  if (v.size() == 1) return {v[0], v[0]};
  if (v.size() != 2) throw ConfigError(key + ": expected 'lo,hi'");
  return {v[0], v[1]};
}

// Monophasic Gaussian bump with the given peak.
void add_bump(VectorXd& x, double center, double sigma, double amplitude) {
  const Index lo = std::max<Index>(0, static_cast<Index>(std::floor(center - 4 * sigma)));
  const Index hi = std::min<Index>(x.size() - 1, static_cast<Index>(std::ceil(center + 4 * sigma)));
  for (Index i = lo; i <= hi; ++i) {
    const double u = (i - center) / sigma;
    x[i] += amplitude * std::exp(-0.5 * u * u);
  }
}

struct SegmentWriter {
  const SynthSpec& spec;
  std::mt19937_64& rng;
  VectorXd& x;
  int channel;
  std::vector<Transient>& transients;

  double fs() const { return spec.sample_rate; }

  void pulse(double t, double width, double amp, Label label) {
    add_biphasic_pulse(x, t * fs(), width * fs(), amp);
    transients.push_back({channel, t, label});
  }

  void spike(double a, double b, const EventParams& p) {
    const double width = uniform(rng, p.width);
    const double margin = std::min(0.25 * (b - a), 0.5 * width + 0.1);
    const double t = std::uniform_real_distribution<double>(a + margin, b - margin)(rng);
    pulse(t, width, sign() * uniform(rng, p.amplitude), Label::SPSW);
  }

  void periodic(double a, double b, const EventParams& p, Label label) {
    const double rate = uniform(rng, p.rate);
    const double period = 1.0 / rate;
    const double width = uniform(rng, p.width);
    const double polarity = sign();
    std::uniform_real_distribution<double> jitter(-spec.period_jitter, spec.period_jitter);
    double t = a + 0.5 * width + std::uniform_real_distribution<double>(0.0, period)(rng);
    // Discharge amplitudes wax and wane over a few seconds.
    const double env_period = uniform(rng, spec.train_envelope_period);
    const double env_phase = std::uniform_real_distribution<double>(0.0, 2.0 * M_PI)(rng);
    while (t + 0.5 * width < b) {
      const double edge = std::min(t - a, b - t);
      const double taper = spec.train_taper > 0.0 && edge < spec.train_taper
                               ? std::sin(0.5 * M_PI * edge / spec.train_taper)
                               : 1.0;
      const double env = taper * (1.0 + spec.train_envelope_depth *
                                            std::sin(2.0 * M_PI * t / env_period + env_phase));
      pulse(t, width * (1.0 + 0.5 * jitter(rng)), env * polarity * uniform(rng, p.amplitude), label);
      t += period * (1.0 + jitter(rng));
    }
  }

  void eye_movement(double a, double b, const EventParams& p) {
    // Alternating slow deflections; sigma of a bump is a sixth of its width.
    double t = a;
    double polarity = sign();
    while (true) {
      const double width = uniform(rng, p.width);
      const double center = t + 0.5 * width;
      if (center + 0.5 * width > b) break;
      add_bump(x, center * fs(), width * fs() / 6.0, polarity * uniform(rng, p.amplitude));
      transients.push_back({channel, center, Label::EYEM});
      polarity = -polarity;
      t += width * std::uniform_real_distribution<double>(1.0, 1.5)(rng);
    }
  }

  void artifact(double a, double b, const EventParams& p) {
    std::normal_distribution<double> gauss;
    double t = a;
    while (t < b) {
      const double len = std::min(uniform(rng, p.width), b - t);
      const double rms = uniform(rng, p.amplitude);
      const Index i0 = static_cast<Index>(std::llround(t * fs()));
      const Index i1 = std::min<Index>(x.size(), static_cast<Index>(std::llround((t + len) * fs())));
      const Index n = std::max<Index>(1, i1 - i0);
      for (Index i = i0; i < i1; ++i) {
        // Hann-tapered burst envelope.
        const double env = std::sin(M_PI * (i - i0 + 0.5) / n);
        x[i] += rms * std::sqrt(2.0) * env * gauss(rng);
      }
      transients.push_back({channel, t + 0.5 * len, Label::ARTF});
      t += len * std::uniform_real_distribution<double>(1.0, 1.3)(rng);
    }
  }

  double sign() { return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0; }
};

}  // namespace

SynthSpec SynthSpec::defaults() {
  SynthSpec s;
  // Training-set event counts: SPSW 645, GPED 6184, PLED 11254, EYEM 1170,
  // ARTF 11053, BCKG 53726 (84032 total).
  const std::array<double, kNumClasses> counts = {645, 6184, 11254, 1170, 11053, 53726};
  const double total = 84032.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) s.class_priors[c] = counts[c] / total;

  auto& p = s.event_params;
  p[class_index(Label::SPSW)] = {{30, 60}, {1, 1}, {1, 1}, {0.03, 0.07}};
  p[class_index(Label::GPED)] = {{20, 40}, {4, 12}, {1, 2}, {0.10, 0.16}};
  p[class_index(Label::PLED)] = {{20, 40}, {4, 12}, {1, 2}, {0.04, 0.08}};
  p[class_index(Label::EYEM)] = {{30, 80}, {1, 4}, {1, 1}, {0.25, 0.5}};
  p[class_index(Label::ARTF)] = {{10, 25}, {1, 6}, {1, 1}, {0.3, 1.0}};
  p[class_index(Label::BCKG)] = {{1, 1}, {4, 20}, {1, 1}, {1, 1}};
  return s;
}

SynthSpec SynthSpec::from_config(const Config& cfg) {
  SynthSpec s = defaults();
  s.seed = static_cast<std::uint64_t>(cfg.get_int("synth.seed", static_cast<long>(s.seed)));
  s.duration = cfg.get_double("synth.duration", s.duration);
  s.num_channels = static_cast<int>(cfg.get_int("synth.channels", s.num_channels));
  s.sample_rate = cfg.get_double("synth.sample_rate", s.sample_rate);
  s.background_rms = cfg.get_double("synth.background_rms", s.background_rms);
  s.gain_spread = cfg.get_double("synth.gain_spread", s.gain_spread);
  s.period_jitter = cfg.get_double("synth.jitter", s.period_jitter);
  s.background_highpass = cfg.get_double("synth.background_highpass", s.background_highpass);
  s.modulation_depth = cfg.get_double("synth.modulation_depth", s.modulation_depth);
  s.train_envelope_depth = cfg.get_double("synth.train_envelope_depth", s.train_envelope_depth);
  s.train_envelope_period = parse_range(cfg, "synth.train_envelope_period", s.train_envelope_period);
  s.train_taper = cfg.get_double("synth.train_taper", s.train_taper);
  for (Label c : kAllClasses) {
    const std::string name(to_string(c));
    auto& p = s.event_params[class_index(c)];
    s.class_priors[class_index(c)] =
        cfg.get_double("synth.prior." + name, s.class_priors[class_index(c)]);
    p.amplitude = parse_range(cfg, "synth." + name + ".amplitude", p.amplitude);
    p.duration = parse_range(cfg, "synth." + name + ".duration", p.duration);
    p.rate = parse_range(cfg, "synth." + name + ".rate", p.rate);
    p.width = parse_range(cfg, "synth." + name + ".width", p.width);
  }
  return s;
}

void SynthSpec::validate() const {
  if (!(duration > 0.0)) throw ConfigError("synth: duration must be positive");
  if (num_channels < 1) throw ConfigError("synth: need at least one channel");
  if (!(sample_rate > 0.0)) throw ConfigError("synth: sample_rate must be positive");
  if (!(background_rms > 0.0)) throw ConfigError("synth: background_rms must be positive");
  if (!(gain_spread >= 1.0)) throw ConfigError("synth: gain_spread must be >= 1");
  if (period_jitter < 0.0 || period_jitter >= 0.5) throw ConfigError("synth: jitter must be in [0, 0.5)");
  if (background_highpass < 0.0 || background_highpass >= sample_rate / 2.0) {
    throw ConfigError("synth: background_highpass must be in [0, sample_rate/2)");
  }
  if (modulation_depth < 0.0) throw ConfigError("synth: modulation_depth must be >= 0");
  if (train_envelope_depth < 0.0 || train_envelope_depth >= 1.0) {
    throw ConfigError("synth: train_envelope_depth must be in [0, 1)");
  }
  if (!(train_envelope_period.lo > 0.0) || train_envelope_period.hi < train_envelope_period.lo) {
    throw ConfigError("synth: train_envelope_period must be positive with lo <= hi");
  }
  if (train_taper < 0.0) throw ConfigError("synth: train_taper must be >= 0");
  double sum = 0.0;
  for (double p : class_priors) {
    if (p < 0.0) throw ConfigError("synth: negative class prior");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("synth: class priors must sum to 1");
  for (Label c : kAllClasses) {
    const auto& p = event_params[class_index(c)];
    for (const Range* r : {&p.amplitude, &p.duration, &p.rate, &p.width}) {
      if (!(r->lo > 0.0) || r->hi < r->lo) {
        throw ConfigError("synth: " + std::string(to_string(c)) +
                          " parameter ranges must be positive with lo <= hi");
      }
    }
  }
}

VectorXd pink_noise(Index n, double rms, std::mt19937_64& rng) {
  // Sum of first-order sections approximating a 1/f spectrum (Kellet).
  std::normal_distribution<double> gauss;
  VectorXd x(n);
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
  for (Index i = 0; i < n; ++i) {
    const double w = gauss(rng);
    b0 = 0.99886 * b0 + w * 0.0555179;
    b1 = 0.99332 * b1 + w * 0.0750759;
    b2 = 0.96900 * b2 + w * 0.1538520;
    b3 = 0.86650 * b3 + w * 0.3104856;
    b4 = 0.55000 * b4 + w * 0.5329522;
    b5 = -0.7616 * b5 - w * 0.0168980;
    x[i] = b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362;
    b6 = w * 0.115926;
  }
  x.array() -= x.mean();
  const double cur = std::sqrt(x.squaredNorm() / static_cast<double>(std::max<Index>(n, 1)));
  if (cur > 0.0) x *= rms / cur;
  return x;
}

void highpass(VectorXd& x, double corner_hz, double sample_rate) {
  if (corner_hz <= 0.0 || x.size() == 0) return;
  const double r = std::exp(-2.0 * M_PI * corner_hz / sample_rate);
  double prev_in = x[0], prev_out = 0.0;
  x[0] = 0.0;
  for (Index i = 1; i < x.size(); ++i) {
    const double in = x[i];
    prev_out = r * prev_out + in - prev_in;
    prev_in = in;
    x[i] = prev_out;
  }
}

void add_biphasic_pulse(VectorXd& x, double center, double width_samples, double amplitude) {
  // -u exp(-u^2/2) peaks at |u| = 1 with magnitude exp(-1/2).
  const double sigma = std::max(width_samples / 6.0, 0.5);
  const double scale = amplitude * std::exp(0.5);
  const Index lo = std::max<Index>(0, static_cast<Index>(std::floor(center - 4 * sigma)));
  const Index hi = std::min<Index>(x.size() - 1, static_cast<Index>(std::ceil(center + 4 * sigma)));
  for (Index i = lo; i <= hi; ++i) {
    const double u = (i - center) / sigma;
    x[i] += -scale * u * std::exp(-0.5 * u * u);
  }
}

SynthCorpus generate(const SynthSpec& spec) {
  spec.validate();
  const auto n = static_cast<Index>(std::llround(spec.duration * spec.sample_rate));
  const int total_epochs = static_cast<int>(std::floor(spec.duration));

  // Segment classes are drawn with probability prior / mean length so that
  // the fraction of time per class converges to the prior.
  std::array<double, kNumClasses> pick_weights{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    pick_weights[c] = spec.class_priors[c] / expected_epochs(spec.event_params[c].duration);
  }

  SynthCorpus out;
  out.record.record_id = "synth-" + std::to_string(spec.seed);
  for (int ch = 0; ch < spec.num_channels; ++ch) {
    std::seed_seq seq{spec.seed, static_cast<std::uint64_t>(ch)};
    std::mt19937_64 rng(seq);
    const double gain = std::exp(std::uniform_real_distribution<double>(
        -std::log(spec.gain_spread), std::log(spec.gain_spread))(rng));

    VectorXd x = pink_noise(n, 1.0, rng);
    highpass(x, spec.background_highpass, spec.sample_rate);
    x *= spec.background_rms / std::sqrt(x.squaredNorm() / static_cast<double>(n));
    if (spec.modulation_depth > 0.0) {
      // Two slow sinusoids in log amplitude, periods 10-40 s.
      std::uniform_real_distribution<double> period(10.0, 40.0), phase(0.0, 2.0 * M_PI);
      const double p1 = period(rng), p2 = period(rng), f1 = phase(rng), f2 = phase(rng);
      for (Index i = 0; i < n; ++i) {
        const double t = i / spec.sample_rate;
        const double m = 0.5 * spec.modulation_depth *
                         (std::sin(2 * M_PI * t / p1 + f1) + std::sin(2 * M_PI * t / p2 + f2));
        x[i] *= std::exp(m);
      }
    }
    std::discrete_distribution<int> pick(pick_weights.begin(), pick_weights.end());
    const std::string name = channel_name(ch);
    SegmentWriter writer{spec, rng, x, ch, out.transients};

    int epoch = 0;
    while (epoch < total_epochs) {
      const Label c = kAllClasses[pick(rng)];
      const auto& p = spec.event_params[class_index(c)];
      const int len = std::min(segment_epochs(uniform(rng, p.duration)), total_epochs - epoch);
      const double a = epoch, b = epoch + len;
      switch (c) {
        case Label::SPSW: writer.spike(a, b, p); break;
        case Label::GPED:
        case Label::PLED: writer.periodic(a, b, p, c); break;
        case Label::EYEM: writer.eye_movement(a, b, p); break;
        case Label::ARTF: writer.artifact(a, b, p); break;
        default: break;
      }
      out.labels.push_back({name, a, b, c});
      epoch += len;
    }
    x *= gain;
    out.record.channels.push_back({name, spec.sample_rate, std::move(x)});
  }
  return out;
}

}  // namespace eegfeat
