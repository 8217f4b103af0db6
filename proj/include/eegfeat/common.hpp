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

#ifndef EEGFEAT_COMMON_HPP
#define EEGFEAT_COMMON_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace eegfeat {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Row-major storage keeps one feature frame contiguous.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Error hierarchy. Everything thrown by the library derives from Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};

// Event labels. The first six are the annotated event classes, in the fixed
// argmax tie-break order. TARG only appears after collapsing to two classes.
enum class Label : int { SPSW = 0, GPED, PLED, EYEM, ARTF, BCKG, TARG };

inline constexpr std::size_t kNumClasses = 6;

inline constexpr std::array<Label, kNumClasses> kAllClasses = {
    Label::SPSW, Label::GPED, Label::PLED,
    Label::EYEM, Label::ARTF, Label::BCKG};

// Rarest first, from the annotated training-set counts.
inline constexpr std::array<Label, kNumClasses> kRarityOrder = {
    Label::SPSW, Label::EYEM, Label::GPED,
    Label::ARTF, Label::PLED, Label::BCKG};

inline constexpr std::size_t class_index(Label l) {
  return static_cast<std::size_t>(l);
}

inline constexpr bool is_target_class(Label l) {
  return l == Label::SPSW || l == Label::GPED || l == Label::PLED;
}

std::string_view to_string(Label l);

/// Parses one of the seven label tokens; nullopt for anything else.
std::optional<Label> parse_label(std::string_view token);

inline constexpr double kFramePeriod = 0.1;
inline constexpr int kFramesPerEpoch = 10;

}  // namespace eegfeat

#endif  // EEGFEAT_COMMON_HPP
