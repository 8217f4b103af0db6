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

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "eegfeat/dynamics.hpp"

namespace eegfeat {

namespace {

constexpr char kMagic[8] = {'F', 'E', 'A', 'T', 'v', '1', '\0', '\0'};
constexpr std::size_t kFixedHeader = 8 + 4 * 3 + 8 + 4;

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

std::uint64_t get_u64(const unsigned char* p) {
  return std::uint64_t(get_u32(p)) | std::uint64_t(get_u32(p + 4)) << 32;
}

}  // namespace

void write_features(const FeatureSequence& seq, const std::filesystem::path& path) {
  if (seq.dim <= 0) throw DataError("write_features: dim must be positive");
  if (seq.frames.rows() > 0 && seq.frames.cols() != seq.dim) {
    throw DataError("write_features: frame width does not match dim");
  }
  std::string buf;
  buf.reserve(kFixedHeader + seq.channel_name.size() +
              4 * static_cast<std::size_t>(seq.frames.size()));
  buf.append(kMagic, sizeof kMagic);
  put_u32(buf, static_cast<std::uint32_t>(seq.dim));
  put_u32(buf, static_cast<std::uint32_t>(seq.frames.rows()));
  put_u32(buf, static_cast<std::uint32_t>(seq.system_id));
  put_u64(buf, std::bit_cast<std::uint64_t>(seq.frame_period));
  put_u32(buf, static_cast<std::uint32_t>(seq.channel_name.size()));
  buf.append(seq.channel_name);
  for (Index t = 0; t < seq.frames.rows(); ++t) {
    for (Index j = 0; j < seq.frames.cols(); ++j) {
      put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(seq.frames(t, j))));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("write failed: " + path.string());
}

FeatureSequence read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  const std::size_t size = raw.size();

  if (size < 8 || std::memcmp(raw.data(), kMagic, 8) != 0) {
    throw FormatError(path.string() + ": bad magic, not a FEATv1 file");
  }
  if (size < kFixedHeader) {
    throw FormatError(path.string() + ": truncated header, expected at least " +
                      std::to_string(kFixedHeader) + " bytes, got " + std::to_string(size));
  }
  FeatureSequence seq;
  seq.dim = static_cast<int>(get_u32(p + 8));
  const std::uint32_t frames = get_u32(p + 12);
  seq.system_id = static_cast<int>(get_u32(p + 16));
  seq.frame_period = std::bit_cast<double>(get_u64(p + 20));
  const std::uint32_t name_len = get_u32(p + 28);
  if (seq.dim <= 0) throw FormatError(path.string() + ": dim must be positive");

  const std::size_t expected = kFixedHeader + name_len +
                               4 * static_cast<std::size_t>(frames) * seq.dim;
  if (size != expected) {
    throw FormatError(path.string() + ": expected " + std::to_string(expected) +
                      " bytes, got " + std::to_string(size));
  }
  seq.channel_name.assign(raw.data() + kFixedHeader, name_len);
  seq.frames.resize(frames, seq.dim);
  const unsigned char* v = p + kFixedHeader + name_len;
  for (Index t = 0; t < seq.frames.rows(); ++t) {
    for (Index j = 0; j < seq.dim; ++j, v += 4) {
      seq.frames(t, j) = std::bit_cast<float>(get_u32(v));
    }
  }
  return seq;
}

}  // namespace eegfeat
