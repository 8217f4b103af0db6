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

#include "eegfeat/frontend.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace eegfeat {

WindowFunction parse_window_function(const std::string& name) {
  if (name == "hamming") return WindowFunction::hamming;
  if (name == "rectangular") return WindowFunction::rectangular;
  throw ConfigError("unknown window function '" + name + "'");
}

Index FrameSpec::window_samples() const {
  return static_cast<Index>(std::llround(window_dur * sample_rate));
}

Index FrameSpec::step_samples() const {
  return static_cast<Index>(std::llround(step_dur * sample_rate));
}

void FrameSpec::validate() const {
  if (!(sample_rate > 0.0)) throw ConfigError("frame: sample_rate must be positive");
  if (!(step_dur > 0.0) || step_dur > window_dur) {
    throw ConfigError("frame: need 0 < step_dur <= window_dur");
  }
  if (window_samples() < 2) throw ConfigError("frame: window shorter than 2 samples");
  if (step_samples() < 1) throw ConfigError("frame: step shorter than 1 sample");
}

VectorXd window_coefficients(Index n, WindowFunction fn) {
  if (fn == WindowFunction::rectangular || n < 2) return VectorXd::Ones(n);
  VectorXd w(n);
  for (Index i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * static_cast<double>(i) / (n - 1));
  }
  return w;
}

Index frame_count(Index len, Index window, Index step) {
  if (len < window) return 0;
  return (len - window) / step + 1;
}

FeatureMatrix frame_signal(const Eigen::Ref<const VectorXd>& samples,
                           const FrameSpec& spec) {
  spec.validate();
  const Index win = spec.window_samples();
  const Index step = spec.step_samples();
  if (samples.size() < win) throw DataError("signal too short");
  const Index n = frame_count(samples.size(), win, step);
  const Eigen::RowVectorXd w = window_coefficients(win, spec.window_function).transpose();
  FeatureMatrix frames(n, win);
  for (Index i = 0; i < n; ++i) {
    frames.row(i) = samples.segment(i * step, win).transpose().cwiseProduct(w);
  }
  return frames;
}

// ---------------------------------------------------------------- filter bank

void FilterBankSpec::validate(double sample_rate, Index window_samples) const {
  if (num_filters < 1) throw ConfigError("filter bank: num_filters must be positive");
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0) {
    throw ConfigError("filter bank: fft_size must be a power of two");
  }
  if (fft_size < window_samples) {
    throw ConfigError("filter bank: fft_size smaller than the analysis window");
  }
  if (!(low_freq >= 0.0 && low_freq < high_freq && high_freq <= sample_rate / 2.0)) {
    throw ConfigError("filter bank: need 0 <= low_freq < high_freq <= sample_rate/2");
  }
}

FilterBank::FilterBank(const FilterBankSpec& spec, double sample_rate)
    : spec_(spec), sample_rate_(sample_rate) {
  spec_.validate(sample_rate, 0);
  const int K = spec_.num_filters;
  const double spacing = (spec_.high_freq - spec_.low_freq) / (K + 1);
  const double bin_hz = sample_rate / spec_.fft_size;
  weights_ = MatrixXd::Zero(K, num_bins());
  for (int k = 0; k < K; ++k) {
    const double left = spec_.low_freq + k * spacing;
    const double center = left + spacing;
    const double right = center + spacing;
    for (Index b = 0; b < num_bins(); ++b) {
      const double f = b * bin_hz;
      if (f > left && f <= center) {
        weights_(k, b) = (f - left) / spacing;
      } else if (f > center && f < right) {
        weights_(k, b) = (right - f) / spacing;
      }
    }
  }
}

double FilterBank::center_frequency(int k) const {
  const double spacing = (spec_.high_freq - spec_.low_freq) / (spec_.num_filters + 1);
  return spec_.low_freq + (k + 1) * spacing;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumAnalyzer::Impl {
  const FilterBank* bank;
  Eigen::FFT<double> fft;
  std::vector<double> padded;
  std::vector<std::complex<double>> bins;
};

SpectrumAnalyzer::SpectrumAnalyzer(const FilterBank& bank)
    : impl_(std::make_unique<Impl>()) {
  impl_->bank = &bank;
  impl_->fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  impl_->padded.assign(bank.spec().fft_size, 0.0);
}

SpectrumAnalyzer::~SpectrumAnalyzer() = default;
SpectrumAnalyzer::SpectrumAnalyzer(SpectrumAnalyzer&&) noexcept = default;
SpectrumAnalyzer& SpectrumAnalyzer::operator=(SpectrumAnalyzer&&) noexcept = default;

SpectralFrame SpectrumAnalyzer::operator()(const Eigen::Ref<const VectorXd>& frame) {
  const auto& bank = *impl_->bank;
  const Index nfft = bank.spec().fft_size;
  if (frame.size() > nfft) throw DataError("spectrum: frame longer than fft_size");
  auto& padded = impl_->padded;
  std::fill(padded.begin(), padded.end(), 0.0);
  for (Index i = 0; i < frame.size(); ++i) padded[i] = frame[i];
  impl_->fft.fwd(impl_->bins, padded);

  SpectralFrame out;
  out.magnitudes.resize(bank.num_bins());
  for (Index b = 0; b < bank.num_bins(); ++b) out.magnitudes[b] = std::abs(impl_->bins[b]);
  out.filter_outputs = bank.weights() * out.magnitudes;
  return out;
}

SpectralFrame spectrum(const Eigen::Ref<const VectorXd>& frame,
                       const FilterBank& bank) {
  SpectrumAnalyzer analyzer(bank);
  return analyzer(frame);
}

// ---------------------------------------------------------------- cepstrum

Eigen::Matrix<double, kNumCepstra, Eigen::Dynamic> cepstral_basis(int num_filters) {
  Eigen::Matrix<double, kNumCepstra, Eigen::Dynamic> basis(kNumCepstra, num_filters);
  const double scale = std::sqrt(2.0 / num_filters);
  for (int j = 1; j <= kNumCepstra; ++j) {
    for (int k = 0; k < num_filters; ++k) {
      basis(j - 1, k) = scale * std::cos(M_PI * j * (2.0 * k + 1.0) / (2.0 * num_filters));
    }
  }
  return basis;
}

CepstralFrame cepstrum(const SpectralFrame& spectral, double log_floor) {
  const auto& fo = spectral.filter_outputs;
  if (fo.size() < 1) throw DataError("cepstrum: no filter outputs");
  const VectorXd logs = fo.cwiseMax(log_floor).array().log().matrix();
  return cepstral_basis(static_cast<int>(fo.size())) * logs;
}

}  // namespace eegfeat
