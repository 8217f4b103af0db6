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

#include "eegfeat/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "eegfeat/config.hpp"

namespace eegfeat {

void SignalRecord::validate() const {
  std::set<std::string> seen;
  for (const auto& ch : channels) {
    if (ch.samples.size() == 0) throw DataError("empty signal");
    if (!(ch.sample_rate > 0.0)) {
      throw DataError("channel " + ch.name + ": sample rate must be positive");
    }
    if (!seen.insert(ch.name).second) {
      throw DataError("duplicate channel name " + ch.name);
    }
  }
}

// ---------------------------------------------------------------- CSV

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  return s.substr(b);
}

std::string where(const std::filesystem::path& p, int line) {
  return p.string() + ":" + std::to_string(line);
}

}  // namespace

SignalRecord read_csv_signal(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  double rate = 0.0;
  bool have_rate = false;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("sample_rate=");
      if (pos != std::string::npos) {
        rate = parse_double(line.substr(pos + 12), where(path, lineno) + ": sample_rate");
        have_rate = true;
      }
      continue;
    }
    if (names.empty()) {
      auto cells = split_csv(line);
      if (cells.size() < 2 || strip(cells[0]) != "time") {
        throw ParseError(where(path, lineno) +
                         ": malformed header, expected 'time,<ch1>,...'");
      }
      for (std::size_t i = 1; i < cells.size(); ++i) {
        auto name = strip(cells[i]);
        if (name.empty()) {
          throw ParseError(where(path, lineno) + ": empty channel name in header");
        }
        names.push_back(name);
      }
      columns.resize(names.size());
      continue;
    }
    auto cells = split_csv(line);
    if (cells.size() != names.size() + 1) {
      throw ParseError(where(path, lineno) + ": expected " +
                       std::to_string(names.size() + 1) + " cells, got " +
                       std::to_string(cells.size()));
    }
    for (std::size_t i = 1; i < cells.size(); ++i) {
      columns[i - 1].push_back(parse_double(cells[i], where(path, lineno)));
    }
  }
  if (names.empty()) throw ParseError(path.string() + ": missing header");
  if (!have_rate) throw ConfigError(path.string() + ": missing '# sample_rate=<Hz>' line");
  if (columns.front().empty()) throw DataError("empty signal");

  SignalRecord rec;
  rec.record_id = path.stem().string();
  for (std::size_t i = 0; i < names.size(); ++i) {
    rec.channels.push_back(
        {names[i], rate, Eigen::Map<VectorXd>(columns[i].data(), columns[i].size())});
  }
  rec.validate();
  return rec;
}

void write_csv_signal(const SignalRecord& record,
                      const std::filesystem::path& path) {
  record.validate();
  if (record.channels.empty()) throw DataError("record has no channels");
  const double rate = record.channels.front().sample_rate;
  const Index n = record.channels.front().samples.size();
  for (const auto& ch : record.channels) {
    if (ch.sample_rate != rate || ch.samples.size() != n) {
      throw DataError("CSV output needs channels with equal rate and length");
    }
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", rate);
  out << "# sample_rate=" << buf << "\ntime";
  for (const auto& ch : record.channels) out << ',' << ch.name;
  out << '\n';
  for (Index i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(i) / rate);
    out << buf;
    for (const auto& ch : record.channels) {
      std::snprintf(buf, sizeof buf, "%.9g",
                    static_cast<double>(static_cast<float>(ch.samples[i])));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

// ---------------------------------------------------------------- EDF

namespace {

constexpr std::size_t kEdfFixedHeader = 256;
constexpr std::size_t kEdfPerSignalHeader = 256;

struct EdfSignalHeader {
  std::string label;
  double physical_min = 0, physical_max = 0;
  double digital_min = 0, digital_max = 0;
  long samples_per_record = 0;
};

class FieldReader {
 public:
  FieldReader(const std::vector<char>& bytes, std::size_t offset)
      : bytes_(bytes), pos_(offset) {}

  std::string ascii(std::size_t width) {
    if (pos_ + width > bytes_.size()) throw ParseError("EDF: truncated header");
    std::string s(bytes_.data() + pos_, width);
    pos_ += width;
    return strip(s);
  }
  double number(std::size_t width, const std::string& what) {
    return parse_double(ascii(width), "EDF " + what);
  }
  long integer(std::size_t width, const std::string& what) {
    return parse_long(ascii(width), "EDF " + what);
  }

 private:
  const std::vector<char>& bytes_;
  std::size_t pos_;
};

}  // namespace

SignalRecord read_edf_signal(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() < kEdfFixedHeader) throw ParseError("EDF: truncated header");

  FieldReader hdr(bytes, 0);
  const std::string version(bytes.data(), 8);
  if (version != "0       ") throw ParseError("EDF: bad version field");
  hdr.ascii(8);
  const std::string patient = hdr.ascii(80);
  const std::string recording = hdr.ascii(80);
  hdr.ascii(8);  // start date
  hdr.ascii(8);  // start time
  const long header_bytes = hdr.integer(8, "header size");
  if (hdr.ascii(44).rfind("EDF+D", 0) == 0) {
    throw ParseError("EDF: discontinuous EDF+D recordings are not supported");
  }
  long num_records = hdr.integer(8, "record count");
  const double record_duration = hdr.number(8, "record duration");
  const long ns = hdr.integer(4, "signal count");
  if (ns <= 0) throw ParseError("EDF: no signals");
  const std::size_t expected_header = kEdfFixedHeader + kEdfPerSignalHeader * ns;
  if (bytes.size() < expected_header) throw ParseError("EDF: truncated header");
  if (header_bytes != static_cast<long>(expected_header)) {
    throw ParseError("EDF: header size field " + std::to_string(header_bytes) +
                     " inconsistent with " + std::to_string(ns) + " signals");
  }
  if (!(record_duration > 0.0)) throw ParseError("EDF: record duration must be positive");

  // Per-signal fields are stored column-wise: all labels, then all
  // transducers, and so on.
  std::vector<EdfSignalHeader> sig(ns);
  FieldReader sh(bytes, kEdfFixedHeader);
  for (auto& s : sig) s.label = sh.ascii(16);
  for (long i = 0; i < ns; ++i) sh.ascii(80);  // transducer
  for (long i = 0; i < ns; ++i) sh.ascii(8);   // physical dimension
  for (auto& s : sig) s.physical_min = sh.number(8, "physical min");
  for (auto& s : sig) s.physical_max = sh.number(8, "physical max");
  for (auto& s : sig) s.digital_min = sh.number(8, "digital min");
  for (auto& s : sig) s.digital_max = sh.number(8, "digital max");
  for (long i = 0; i < ns; ++i) sh.ascii(80);  // prefiltering
  for (auto& s : sig) s.samples_per_record = sh.integer(8, "samples per record");

  std::size_t record_samples = 0;
  for (const auto& s : sig) {
    if (s.samples_per_record < 0) throw ParseError("EDF: negative samples per record");
    record_samples += static_cast<std::size_t>(s.samples_per_record);
  }
  const std::size_t record_bytes = 2 * record_samples;
  const std::size_t payload = bytes.size() - expected_header;
  if (num_records < 0) {
    num_records = record_bytes ? static_cast<long>(payload / record_bytes) : 0;
  }
  const std::size_t needed = record_bytes * static_cast<std::size_t>(num_records);
  if (payload < needed) {
    throw ParseError("EDF: data truncated, expected " + std::to_string(needed) +
                     " bytes, found " + std::to_string(payload));
  }

  SignalRecord rec;
  rec.record_id = recording.empty() ? path.stem().string() : recording;
  std::vector<std::size_t> offsets(ns);
  std::size_t acc = 0;
  for (long i = 0; i < ns; ++i) {
    offsets[i] = acc;
    acc += 2 * static_cast<std::size_t>(sig[i].samples_per_record);
  }

  for (long i = 0; i < ns; ++i) {
    const auto& s = sig[i];
    if (s.label == "EDF Annotations") {
      std::clog << "warning: " << path.string() << ": skipping annotation signal\n";
      continue;
    }
    if (s.digital_max == s.digital_min) {
      throw DataError("EDF signal '" + s.label + "': digital min equals digital max");
    }
    const double gain =
        (s.physical_max - s.physical_min) / (s.digital_max - s.digital_min);
    Channel ch;
    ch.name = s.label;
    ch.sample_rate = static_cast<double>(s.samples_per_record) / record_duration;
    ch.samples.resize(s.samples_per_record * num_records);
    Index k = 0;
    for (long r = 0; r < num_records; ++r) {
      const char* p = bytes.data() + expected_header + r * record_bytes + offsets[i];
      for (long j = 0; j < s.samples_per_record; ++j, p += 2) {
        const auto lo = static_cast<std::uint8_t>(p[0]);
        const auto hi = static_cast<std::uint8_t>(p[1]);
        const auto digital = static_cast<std::int16_t>(
            static_cast<std::uint16_t>(lo | (hi << 8)));
        ch.samples[k++] = (digital - s.digital_min) * gain + s.physical_min;
      }
    }
    rec.channels.push_back(std::move(ch));
  }
  if (rec.channels.empty()) throw DataError("EDF: no data signals");
  rec.validate();
  return rec;
}

SignalRecord read_signal(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error("input file not found: " + path.string());
  }
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".edf" ? read_edf_signal(path) : read_csv_signal(path);
}

// ---------------------------------------------------------------- resample

void ResampleSpec::validate() const {
  if (!(target_rate > 0.0)) throw ConfigError("resample: target_rate must be positive");
  if (filter_taps < 3 || filter_taps % 2 == 0) {
    throw ConfigError("resample: filter_taps must be odd and >= 3");
  }
  if (kaiser_beta < 0.0) throw ConfigError("resample: kaiser_beta must be >= 0");
}

namespace {

// Passband edge as a fraction of the lower Nyquist frequency.
constexpr double kCutoffFraction = 0.9;
constexpr long kMaxPolyphase = 4096;

struct Ratio {
  long up = 1;    // L
  long down = 1;  // M
};

// out/in as a reduced fraction; continued fractions when a rate is not an
// integer.
Ratio rational_ratio(double in_rate, double out_rate) {
  const bool integral = std::abs(in_rate - std::round(in_rate)) < 1e-9 &&
                        std::abs(out_rate - std::round(out_rate)) < 1e-9;
  if (integral) {
    const long a = std::lround(out_rate), b = std::lround(in_rate);
    const long g = std::gcd(a, b);
    return {a / g, b / g};
  }
  const double x = out_rate / in_rate;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 40; ++it) {
    const long a = static_cast<long>(std::floor(r));
    const long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > 100000) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (std::abs(static_cast<double>(p1) / q1 - x) < 1e-12 * x) break;
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return {p1, q1};
}

Index reflect(Index n, Index len) {
  if (len == 1) return 0;
  const Index period = 2 * (len - 1);
  n %= period;
  if (n < 0) n += period;
  return n < len ? n : period - n;
}

class SincKernel {
 public:
  SincKernel(double cutoff, double half_width, double beta)
      : cutoff_(cutoff), half_(half_width), beta_(beta),
        norm_(std::cyl_bessel_i(0.0, beta)) {}

  double half_width() const { return half_; }

  double operator()(double tau) const {
    const double u = tau / half_;
    if (std::abs(u) > 1.0) return 0.0;
    const double x = 2.0 * cutoff_ * tau;
    const double sinc = x == 0.0 ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
    const double w = std::cyl_bessel_i(0.0, beta_ * std::sqrt(1.0 - u * u)) / norm_;
    return 2.0 * cutoff_ * sinc * w;
  }

 private:
  double cutoff_, half_, beta_, norm_;
};

struct Phase {
  Index first = 0;  // offset of the first tap relative to floor(t)
  VectorXd weights;
};

Phase make_phase(const SincKernel& kernel, double frac) {
  const double h = kernel.half_width();
  Phase ph;
  ph.first = static_cast<Index>(std::ceil(frac - h));
  const Index last = static_cast<Index>(std::floor(frac + h));
  ph.weights.resize(last - ph.first + 1);
  for (Index k = ph.first; k <= last; ++k) {
    ph.weights[k - ph.first] = kernel(frac - static_cast<double>(k));
  }
  ph.weights /= ph.weights.sum();  // unit DC gain per phase
  return ph;
}

double apply_phase(const Phase& ph, const VectorXd& x, Index base) {
  const Index len = x.size();
  const Index start = base + ph.first;
  const Index n = ph.weights.size();
  if (start >= 0 && start + n <= len) {
    return ph.weights.dot(x.segment(start, n));
  }
  double acc = 0.0;
  for (Index k = 0; k < n; ++k) acc += ph.weights[k] * x[reflect(start + k, len)];
  return acc;
}

}  // namespace

Channel resample(const Channel& channel, const ResampleSpec& spec) {
  spec.validate();
  if (channel.samples.size() == 0) throw DataError("empty signal");
  if (!(channel.sample_rate > 0.0)) throw DataError("resample: invalid input rate");
  if (channel.sample_rate == spec.target_rate) return channel;

  const double in_rate = channel.sample_rate;
  const double out_rate = spec.target_rate;
  const Ratio ratio = rational_ratio(in_rate, out_rate);
  const Index in_len = channel.samples.size();
  const auto out_len = static_cast<Index>(
      std::llround(static_cast<double>(in_len) * out_rate / in_rate));

  // Cutoff in cycles per input sample; taps are counted at the lower rate.
  const double lower_ratio = std::min(1.0, out_rate / in_rate);
  const double cutoff = 0.5 * kCutoffFraction * lower_ratio;
  const double half_width = 0.5 * (spec.filter_taps - 1) / lower_ratio;
  const SincKernel kernel(cutoff, half_width, spec.kaiser_beta);

  Channel out;
  out.name = channel.name;
  out.sample_rate = out_rate;
  out.samples.resize(out_len);

  const long L = ratio.up, M = ratio.down;
  if (L <= kMaxPolyphase) {
    std::vector<Phase> phases;
    phases.reserve(L);
    for (long p = 0; p < L; ++p) {
      phases.push_back(make_phase(kernel, static_cast<double>(p) / L));
    }
    for (Index j = 0; j < out_len; ++j) {
      const long long pos = static_cast<long long>(j) * M;
      out.samples[j] = apply_phase(phases[pos % L], channel.samples,
                                   static_cast<Index>(pos / L));
    }
  } else {
    for (Index j = 0; j < out_len; ++j) {
      const double t = static_cast<double>(j) * in_rate / out_rate;
      const double base = std::floor(t);
      out.samples[j] = apply_phase(make_phase(kernel, t - base), channel.samples,
                                   static_cast<Index>(base));
    }
  }
  return out;
}

SignalRecord resample(const SignalRecord& record, const ResampleSpec& spec) {
  SignalRecord out;
  out.record_id = record.record_id;
  out.channels.reserve(record.channels.size());
  for (const auto& ch : record.channels) out.channels.push_back(resample(ch, spec));
  return out;
}

}  // namespace eegfeat
