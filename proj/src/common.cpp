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

#include "eegfeat/common.hpp"

namespace eegfeat {

std::string_view to_string(Label l) {
  switch (l) {
    case Label::SPSW: return "SPSW";
    case Label::GPED: return "GPED";
    case Label::PLED: return "PLED";
    case Label::EYEM: return "EYEM";
    case Label::ARTF: return "ARTF";
    case Label::BCKG: return "BCKG";
    case Label::TARG: return "TARG";
  }
  return "?";
}

std::optional<Label> parse_label(std::string_view token) {
  for (int i = 0; i <= static_cast<int>(Label::TARG); ++i) {
    auto l = static_cast<Label>(i);
    if (to_string(l) == token) return l;
  }
  return std::nullopt;
}

}  // namespace eegfeat
