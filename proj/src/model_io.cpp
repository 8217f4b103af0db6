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

#include <cstdio>
#include <fstream>
#include <sstream>

#include "eegfeat/config.hpp"
#include "eegfeat/models.hpp"

namespace eegfeat {

// Layout (whitespace separated, one block per class in class order):
//
//   EEGFEAT-MODEL 1
//   system_id 5
//   dim 9
//   class SPSW
//   states 3
//   transitions
//   <states x states values>
//   state 0 mixtures 4
//   weights <4 values>
//   mean 0 <dim values>
//   var 0 <dim values>
//   ...
//   end

namespace {

constexpr int kModelVersion = 1;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class TokenReader {
 public:
  TokenReader(std::istream& in, std::string origin) : in_(in), origin_(std::move(origin)) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw FormatError(origin_ + ": unexpected end of model file");
    return w;
  }
  void expect(const std::string& keyword) {
    const auto w = word();
    if (w != keyword) {
      throw FormatError(origin_ + ": expected '" + keyword + "', found '" + w + "'");
    }
  }
  double real() { return parse_double(word(), origin_); }
  long integer() { return parse_long(word(), origin_); }

 private:
  std::istream& in_;
  std::string origin_;
};

}  // namespace

void write_models(const ModelSet& models, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "EEGFEAT-MODEL " << kModelVersion << "\n";
  out << "system_id " << models.system_id << "\n";
  out << "dim " << models.dim << "\n";
  for (const auto& m : models.models) {
    out << "class " << to_string(m.class_label) << "\n";
    out << "states " << m.num_states() << "\n";
    out << "transitions\n";
    for (Index i = 0; i < m.transitions.rows(); ++i) {
      for (Index j = 0; j < m.transitions.cols(); ++j) {
        out << (j ? " " : "") << fmt(m.transitions(i, j));
      }
      out << "\n";
    }
    for (int s = 0; s < m.num_states(); ++s) {
      const auto& gm = m.states[s];
      out << "state " << s << " mixtures " << gm.num_components() << "\nweights";
      for (Index k = 0; k < gm.num_components(); ++k) out << " " << fmt(gm.weights[k]);
      out << "\n";
      for (Index k = 0; k < gm.num_components(); ++k) {
        out << "mean " << k;
        for (Index d = 0; d < gm.dim(); ++d) out << " " << fmt(gm.means(k, d));
        out << "\nvar " << k;
        for (Index d = 0; d < gm.dim(); ++d) out << " " << fmt(gm.variances(k, d));
        out << "\n";
      }
    }
  }
  out << "end\n";
  if (!out) throw Error("write failed: " + path.string());
}

ModelSet read_models(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  TokenReader r(in, path.string());
  r.expect("EEGFEAT-MODEL");
  if (r.integer() != kModelVersion) throw FormatError(path.string() + ": unsupported model version");
  ModelSet set;
  r.expect("system_id");
  set.system_id = static_cast<int>(r.integer());
  r.expect("dim");
  set.dim = r.integer();
  if (set.dim < 1) throw FormatError(path.string() + ": dim must be positive");

  for (std::size_t c = 0; c < kNumClasses; ++c) {
    r.expect("class");
    const auto label = parse_label(r.word());
    if (!label || *label != kAllClasses[c]) {
      throw FormatError(path.string() + ": expected class " + std::string(to_string(kAllClasses[c])));
    }
    HmmModel m;
    m.class_label = *label;
    r.expect("states");
    const long S = r.integer();
    if (S < 1) throw FormatError(path.string() + ": state count must be positive");
    r.expect("transitions");
    m.transitions.resize(S, S);
    for (long i = 0; i < S; ++i) {
      for (long j = 0; j < S; ++j) m.transitions(i, j) = r.real();
    }
    for (long s = 0; s < S; ++s) {
      r.expect("state");
      if (r.integer() != s) throw FormatError(path.string() + ": states out of order");
      r.expect("mixtures");
      const long M = r.integer();
      if (M < 1) throw FormatError(path.string() + ": mixture count must be positive");
      GaussianMixture gm;
      gm.weights.resize(M);
      gm.means.resize(M, set.dim);
      gm.variances.resize(M, set.dim);
      r.expect("weights");
      for (long k = 0; k < M; ++k) gm.weights[k] = r.real();
      for (long k = 0; k < M; ++k) {
        r.expect("mean");
        if (r.integer() != k) throw FormatError(path.string() + ": components out of order");
        for (Index d = 0; d < set.dim; ++d) gm.means(k, d) = r.real();
        r.expect("var");
        if (r.integer() != k) throw FormatError(path.string() + ": components out of order");
        for (Index d = 0; d < set.dim; ++d) gm.variances(k, d) = r.real();
      }
      m.states.push_back(std::move(gm));
    }
    try {
      m.validate();
    } catch (const DataError& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
    set.models[c] = std::move(m);
  }
  r.expect("end");
  return set;
}

}  // namespace eegfeat
