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

#ifndef EEGFEAT_FRONTEND_HPP
#define EEGFEAT_FRONTEND_HPP

#include <memory>
#include <string>

#include "eegfeat/common.hpp"

namespace eegfeat {

enum class WindowFunction { rectangular, hamming };

WindowFunction parse_window_function(const std::string& name);

struct FrameSpec {
  double window_dur = 0.2;  // s
  double step_dur = 0.1;    // s
  double sample_rate = 250.0;
  WindowFunction window_function = WindowFunction::hamming;

  Index window_samples() const;
  Index step_samples() const;
  void validate() const;
};

/// Window coefficients of length n.
VectorXd window_coefficients(Index n, WindowFunction fn);

/// floor((len - window) / step) + 1, or 0 when the signal is shorter than
/// one window.
Index frame_count(Index len, Index window, Index step);

/// One windowed frame per row. Throws DataError("signal too short") when
/// fewer samples than one window are available.
FeatureMatrix frame_signal(const Eigen::Ref<const VectorXd>& samples,
                           const FrameSpec& spec);

struct FilterBankSpec {
  int num_filters = 20;
  double low_freq = 0.0;    // Hz
  double high_freq = 125.0; // Hz
  int fft_size = 256;

  void validate(double sample_rate, Index window_samples) const;
};

// Linearly spaced triangular filters. Filter k rises from edge k to its
// peak at edge k+1 and falls to zero at edge k+2, so every peak is the next
// filter's left edge.
class FilterBank {
 public:
  FilterBank(const FilterBankSpec& spec, double sample_rate);

  const FilterBankSpec& spec() const { return spec_; }
  double sample_rate() const { return sample_rate_; }
  Index num_bins() const { return spec_.fft_size / 2 + 1; }

  /// num_filters x num_bins.
  const MatrixXd& weights() const { return weights_; }
  double center_frequency(int k) const;

 private:
  FilterBankSpec spec_;
  double sample_rate_;
  MatrixXd weights_;
};

struct SpectralFrame {
  VectorXd magnitudes;      // fft_size/2 + 1
  VectorXd filter_outputs;  // num_filters
};

inline constexpr int kNumCepstra = 7;
using CepstralFrame = Eigen::Matrix<double, kNumCepstra, 1>;

inline constexpr double kDefaultLogFloor = 1e-10;

// Reusable FFT + filter bank state. Not thread-safe; use one per worker.
class SpectrumAnalyzer {
 public:
  explicit SpectrumAnalyzer(const FilterBank& bank);
  ~SpectrumAnalyzer();
  SpectrumAnalyzer(SpectrumAnalyzer&&) noexcept;
  SpectrumAnalyzer& operator=(SpectrumAnalyzer&&) noexcept;

  SpectralFrame operator()(const Eigen::Ref<const VectorXd>& frame);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// |real FFT| of the zero-padded frame and its filter bank outputs.
SpectralFrame spectrum(const Eigen::Ref<const VectorXd>& frame,
                       const FilterBank& bank);

/// Orthonormal DCT-II rows 1..7 for a bank of `num_filters` channels.
Eigen::Matrix<double, kNumCepstra, Eigen::Dynamic> cepstral_basis(int num_filters);

/// c1..c7 of the orthonormal DCT-II of log(max(filter_outputs, log_floor)).
/// c0 is dropped.
CepstralFrame cepstrum(const SpectralFrame& spectral,
                       double log_floor = kDefaultLogFloor);

}  // namespace eegfeat

#endif  // EEGFEAT_FRONTEND_HPP
