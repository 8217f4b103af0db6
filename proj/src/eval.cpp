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

#include "eegfeat/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "eegfeat/config.hpp"

namespace eegfeat {

std::string_view to_string(Paradigm p) {
  switch (p) {
    case Paradigm::six: return "6-way";
    case Paradigm::four: return "4-way";
    case Paradigm::two: return "2-way";
  }
  return "?";
}

Label collapse(Label label, Paradigm paradigm) {
  if (label == Label::TARG) throw DataError("collapse: TARG is not an event class");
  switch (paradigm) {
    case Paradigm::six:
      return label;
    case Paradigm::four:
      return is_target_class(label) ? label : Label::BCKG;
    case Paradigm::two:
      return is_target_class(label) ? Label::TARG : Label::BCKG;
  }
  throw DataError("collapse: unknown paradigm");
}

// ---------------------------------------------------------------- labels

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t b = 0;
    while (b < cell.size() && cell[b] == ' ') ++b;
    out.push_back(cell.substr(b));
  }
  return out;
}

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

using Cell = std::pair<std::string, Index>;

}  // namespace

std::vector<EventLabel> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<EventLabel> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto cells = split(line, ',');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (cells.size() != 4) throw ParseError(where + ": expected channel,start,stop,label");
    if (lineno == 1 && cells[0] == "channel" && cells[3] == "label") continue;
    EventLabel l;
    l.channel_name = cells[0];
    l.start_time = parse_double(cells[1], where);
    l.stop_time = parse_double(cells[2], where);
    const auto label = parse_label(cells[3]);
    if (!label || *label == Label::TARG) {
      throw ParseError(where + ": unknown class '" + cells[3] + "'");
    }
    l.label = *label;
    if (!(l.start_time < l.stop_time)) throw ParseError(where + ": start must precede stop");
    out.push_back(std::move(l));
  }
  return out;
}

void write_labels(const std::vector<EventLabel>& labels, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "channel,start,stop,label\n";
  for (const auto& l : labels) {
    out << l.channel_name << ',' << fmt(l.start_time, "%.6f") << ','
        << fmt(l.stop_time, "%.6f") << ',' << to_string(l.label) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<EpochReference> label_to_epochs(const std::vector<EventLabel>& labels,
                                            const std::map<std::string, Index>& epochs_per_channel,
                                            double epoch_dur) {
  constexpr double kTieTolerance = 1e-9;
  std::map<std::string, std::vector<const EventLabel*>> by_channel;
  for (const auto& l : labels) by_channel[l.channel_name].push_back(&l);

  std::vector<EpochReference> out;
  for (const auto& [channel, count] : epochs_per_channel) {
    const auto it = by_channel.find(channel);
    for (Index e = 0; e < count; ++e) {
      const double lo = e * epoch_dur, hi = (e + 1) * epoch_dur;
      std::array<double, kNumClasses> overlap{};
      if (it != by_channel.end()) {
        for (const auto* l : it->second) {
          const double ov = std::min(hi, l->stop_time) - std::max(lo, l->start_time);
          if (ov > 0.0) overlap[class_index(l->label)] += ov;
        }
      }
      Label best = Label::BCKG;
      double best_overlap = 0.0;
      for (Label c : kRarityOrder) {
        if (overlap[class_index(c)] > best_overlap + kTieTolerance) {
          best = c;
          best_overlap = overlap[class_index(c)];
        }
      }
      out.push_back({channel, e, best});
    }
  }
  return out;
}

// ---------------------------------------------------------------- scoring

namespace {

// Pairs every hypothesis with its reference; throws listing unmatched cells.
std::vector<std::pair<const EpochHypothesis*, Label>> align(
    const std::vector<EpochHypothesis>& hyps, const std::vector<EpochReference>& refs) {
  std::map<Cell, Label> ref_map;
  for (const auto& r : refs) ref_map[{r.channel_name, r.epoch_index}] = r.label;
  std::vector<std::pair<const EpochHypothesis*, Label>> out;
  std::vector<std::string> missing;
  std::map<Cell, bool> seen;
  for (const auto& h : hyps) {
    const Cell cell{h.channel_name, h.epoch_index};
    auto it = ref_map.find(cell);
    if (it == ref_map.end()) {
      missing.push_back("no reference for " + h.channel_name + "#" + std::to_string(h.epoch_index));
    } else {
      out.emplace_back(&h, it->second);
      seen[cell] = true;
    }
  }
  for (const auto& [cell, label] : ref_map) {
    if (!seen.count(cell)) {
      missing.push_back("no hypothesis for " + cell.first + "#" + std::to_string(cell.second));
    }
  }
  if (!missing.empty()) {
    std::string msg = "hypotheses and references are misaligned (" +
                      std::to_string(missing.size()) + " cells):";
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 10); ++i) {
      msg += " " + missing[i] + ";";
    }
    if (missing.size() > 10) msg += " ...";
    throw DataError(msg);
  }
  return out;
}

}  // namespace

double error_rate(const std::vector<EpochHypothesis>& hyps,
                  const std::vector<EpochReference>& refs, Paradigm paradigm) {
  const auto pairs = align(hyps, refs);
  if (pairs.empty()) throw DataError("no epochs to score");
  std::size_t errors = 0;
  for (const auto& [h, ref] : pairs) {
    if (collapse(h->hypothesis, paradigm) != collapse(ref, paradigm)) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(pairs.size());
}

std::vector<DETPoint> det_curve(const std::vector<EpochHypothesis>& hyps,
                                const std::vector<EpochReference>& refs, int num_thresholds) {
  if (num_thresholds < 2) throw ConfigError("det_curve: need at least 2 thresholds");
  const auto pairs = align(hyps, refs);
  std::vector<double> targ, bckg;
  for (const auto& [h, ref] : pairs) {
    (collapse(ref, Paradigm::two) == Label::TARG ? targ : bckg).push_back(h->score);
  }
  if (targ.empty()) throw DataError("det_curve: no TARG reference epochs");
  if (bckg.empty()) throw DataError("det_curve: no BCKG reference epochs");
  std::sort(targ.begin(), targ.end());
  std::sort(bckg.begin(), bckg.end());

  std::vector<double> all(targ);
  all.insert(all.end(), bckg.begin(), bckg.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const double lo = all.front(), hi = all.back();

  std::vector<double> thresholds;
  thresholds.push_back(std::nextafter(lo, -std::numeric_limits<double>::infinity()));
  if (static_cast<int>(all.size()) <= num_thresholds) {
    thresholds.insert(thresholds.end(), all.begin(), all.end());
  } else {
    for (int i = 0; i + 1 < num_thresholds; ++i) {
      thresholds.push_back(std::min(hi, lo + (hi - lo) * i / (num_thresholds - 1)));
    }
    thresholds.push_back(hi);
  }
  thresholds.push_back(std::nextafter(hi, std::numeric_limits<double>::infinity()));

  // Fraction of sorted values >= tau.
  auto above = [](const std::vector<double>& v, double tau) {
    const auto it = std::lower_bound(v.begin(), v.end(), tau);
    return static_cast<double>(v.end() - it) / static_cast<double>(v.size());
  };
  std::vector<DETPoint> curve;
  curve.reserve(thresholds.size());
  for (double tau : thresholds) curve.push_back({tau, above(targ, tau), above(bckg, tau)});
  return curve;
}

double miss_rate_at(const std::vector<DETPoint>& curve, double p_fa) {
  double best = 0.0;
  for (const auto& p : curve) {
    if (p.p_false_alarm <= p_fa) best = std::max(best, p.p_detection);
  }
  return 1.0 - best;
}

double normal_deviate(double p) {
  p = std::clamp(p, 1e-6, 1.0 - 1e-6);
  // Rational approximation (Acklam) refined by one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

void write_det_csv(const std::vector<DETPoint>& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "threshold,p_fa,p_det,dev_fa,dev_det\n";
  for (const auto& p : curve) {
    out << fmt(p.threshold) << ',' << fmt(p.p_false_alarm) << ',' << fmt(p.p_detection) << ','
        << fmt(normal_deviate(p.p_false_alarm), "%.6f") << ','
        << fmt(normal_deviate(p.p_detection), "%.6f") << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

void write_hypotheses(const std::vector<EpochHypothesis>& hyps, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "channel,epoch,hypothesis,score";
  for (Label c : kAllClasses) out << ",ll_" << to_string(c);
  out << '\n';
  for (const auto& h : hyps) {
    out << h.channel_name << ',' << h.epoch_index << ',' << to_string(h.hypothesis) << ','
        << fmt(h.score);
    for (double ll : h.per_class_loglik) out << ',' << fmt(ll);
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<EpochHypothesis> read_hypotheses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<EpochHypothesis> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    const auto cells = split(line, ',');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (cells.size() != 4 + kNumClasses) throw ParseError(where + ": wrong number of fields");
    EpochHypothesis h;
    h.channel_name = cells[0];
    h.epoch_index = parse_long(cells[1], where);
    const auto label = parse_label(cells[2]);
    if (!label || *label == Label::TARG) throw ParseError(where + ": unknown class");
    h.hypothesis = *label;
    h.score = parse_double(cells[3], where);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      h.per_class_loglik[c] = parse_double(cells[4 + c], where);
    }
    out.push_back(std::move(h));
  }
  return out;
}

namespace {

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
  return n;
}

std::string pad_right(const std::string& s, std::size_t width) {
  const std::size_t w = display_width(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

}  // namespace

std::string format_report(const std::vector<ScoreRow>& rows) {
  std::size_t desc_width = std::string("System Description").size();
  for (const auto& r : rows) desc_width = std::max(desc_width, display_width(r.description));

  std::ostringstream out;
  out << "No.  " << pad_right("System Description", desc_width)
      << "  Dims.   6-Way   4-Way   2-Way\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%3d  ", r.system_id);
    out << buf << pad_right(r.description, desc_width);
    std::snprintf(buf, sizeof buf, "  %5d  %5.1f%%  %5.1f%%  %5.1f%%\n", r.dims,
                  100.0 * r.error_six, 100.0 * r.error_four, 100.0 * r.error_two);
    out << buf;
  }
  return out.str();
}

}  // namespace eegfeat
