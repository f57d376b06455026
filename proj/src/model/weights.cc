// src/model/weights.cc

// Copyright 2026  The avse Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "avse/model/weights.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "avse/error.h"

namespace avse::model {

static_assert(std::endian::native == std::endian::little,
              "weight files are little-endian");

namespace {

enum DType : uint8_t { kF32 = 1, kF64 = 2, kI64 = 3, kU8 = 4 };

std::size_t DTypeSize(uint8_t d) {
  switch (d) {
    case kF32: return 4;
    case kF64: return 8;
    case kI64: return 8;
    case kU8: return 1;
  }
  return 0;
}

struct Record {
  uint8_t dtype = 0;
  nn::Shape shape;
  std::vector<uint8_t> bytes;
};

class Writer {
 public:
  template <typename T>
  void Put(T v) {
    const auto* p = reinterpret_cast<const uint8_t*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void Bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  void Add(const std::string& name, uint8_t dtype, const nn::Shape& shape,
           const void* data) {
    Put(uint32_t(name.size()));
    Bytes(name.data(), name.size());
    Put(dtype);
    Put(uint32_t(shape.size()));
    for (std::size_t d : shape) Put(uint64_t(d));
    Bytes(data, nn::NumElements(shape) * DTypeSize(dtype));
    ++records_;
  }
  std::vector<uint8_t>& buffer() { return buf_; }
  uint32_t records() const { return records_; }

 private:
  std::vector<uint8_t> buf_;
  uint32_t records_ = 0;
};

class Reader {
 public:
  Reader(std::span<const uint8_t> data, std::string origin)
      : data_(data), origin_(std::move(origin)) {}
  template <typename T>
  T Get() {
    T v;
    std::memcpy(&v, Take(sizeof(T)), sizeof(T));
    return v;
  }
  const uint8_t* Take(std::size_t n) {
    if (n > data_.size() - pos_)
      throw Error(ErrorCode::kCorruptFile, origin_ + ": truncated record");
    const uint8_t* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::span<const uint8_t> data_;
  std::size_t pos_ = 0;
  std::string origin_;
};

uint32_t ModalityTag(Modality m) {
  switch (m) {
    case Modality::kAudioVisual: return 0;
    case Modality::kAudioOnly: return 1;
    case Modality::kVideoOnly: return 2;
  }
  return 0;
}

}  // namespace

uint64_t Fnv1a64(std::span<const uint8_t> bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

void SaveModel(TrainedModel& model, const std::filesystem::path& path) {
  Writer body;
  const ModelSpec& spec = model.spec();
  for (const auto& p : model.network().Params())
    body.Add(p.name, kF32, p.value->shape(), p.value->data());
  for (const auto& b : model.network().Buffers())
    body.Add(b.name, kF32, b.value->shape(), b.value->data());

  const FeatureStats& s = model.stats();
  if (s.has_audio()) {
    body.Add("stats.audio_mean", kF64, {s.audio_mean.size()}, s.audio_mean.data());
    body.Add("stats.audio_std", kF64, {s.audio_std.size()}, s.audio_std.data());
  }
  const double video[] = {s.video_mean, s.video_std};
  body.Add("stats.video", kF64, {2}, video);
  const double shape_meta[] = {double(spec.channel_divisor), spec.leaky_alpha,
                               spec.dropout, spec.clip_max};
  body.Add("meta.spec", kF64, {4}, shape_meta);
  const TrainingMetadata& m = model.metadata;
  const int64_t ints[] = {m.epoch, int64_t(m.seed)};
  body.Add("meta.training", kI64, {2}, ints);
  body.Add("meta.validation_loss", kF64, {1}, &m.validation_loss);
  body.Add("meta.train_condition", kU8, {m.train_condition.size()},
           m.train_condition.data());

  Writer file;
  file.Bytes("AVSE", 4);
  file.Put(kWeightFormatVersion);
  file.Put(ModalityTag(spec.modality));
  file.Put(body.records());
  file.Bytes(body.buffer().data(), body.buffer().size());
  file.Put(Fnv1a64(file.buffer()));

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(file.buffer().data()),
              std::streamsize(file.buffer().size()));
    if (!out) throw Error(ErrorCode::kIoError, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIoError,
                "cannot move model into " + path.string() + ": " + ec.message());
  }
}

std::unique_ptr<TrainedModel> LoadModel(const std::filesystem::path& path,
                                        const ModelSpec* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  const std::string origin = path.string();
  if (bytes.size() < 24 || std::memcmp(bytes.data(), "AVSE", 4) != 0)
    throw Error(ErrorCode::kCorruptFile, origin + ": not a model file");
  const std::size_t payload = bytes.size() - 8;
  uint64_t stored;
  std::memcpy(&stored, bytes.data() + payload, 8);
  if (stored != Fnv1a64({bytes.data(), payload}))
    throw Error(ErrorCode::kCorruptFile, origin + ": checksum mismatch");

  Reader r({bytes.data() + 4, payload - 4}, origin);
  if (r.Get<uint32_t>() != kWeightFormatVersion)
    throw Error(ErrorCode::kCorruptFile, origin + ": unsupported version");
  const uint32_t tag = r.Get<uint32_t>();
  if (tag > 2) throw Error(ErrorCode::kCorruptFile, origin + ": bad modality");
  const Modality modality = tag == 0   ? Modality::kAudioVisual
                            : tag == 1 ? Modality::kAudioOnly
                                       : Modality::kVideoOnly;
  std::map<std::string, Record> records;
  const uint32_t count = r.Get<uint32_t>();
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t len = r.Get<uint32_t>();
    std::string name(reinterpret_cast<const char*>(r.Take(len)), len);
    Record rec;
    rec.dtype = r.Get<uint8_t>();
    if (DTypeSize(rec.dtype) == 0)
      throw Error(ErrorCode::kCorruptFile, origin + ": bad dtype in " + name);
    const uint32_t rank = r.Get<uint32_t>();
    if (rank > 8) throw Error(ErrorCode::kCorruptFile, origin + ": bad rank");
    std::size_t elems = 1;
    for (uint32_t d = 0; d < rank; ++d) {
      rec.shape.push_back(std::size_t(r.Get<uint64_t>()));
      if (rec.shape.back() > (std::size_t(1) << 40))
        throw Error(ErrorCode::kCorruptFile, origin + ": bad dimension");
      elems *= rec.shape.back();
    }
    const std::size_t n = elems * DTypeSize(rec.dtype);
    const uint8_t* p = r.Take(n);
    rec.bytes.assign(p, p + n);
    records.emplace(std::move(name), std::move(rec));
  }
  if (!r.done()) throw Error(ErrorCode::kCorruptFile, origin + ": trailing bytes");

  auto take = [&](const std::string& name, uint8_t dtype) -> Record {
    auto it = records.find(name);
    if (it == records.end())
      throw Error(ErrorCode::kShapeMismatchOnLoad, origin + ": missing " + name);
    if (it->second.dtype != dtype)
      throw Error(ErrorCode::kCorruptFile, origin + ": wrong dtype for " + name);
    Record rec = std::move(it->second);
    records.erase(it);
    return rec;
  };
  auto doubles = [&](const std::string& name) {
    Record rec = take(name, kF64);
    std::vector<double> v(rec.bytes.size() / 8);
    std::memcpy(v.data(), rec.bytes.data(), rec.bytes.size());
    return v;
  };

  const std::vector<double> meta = doubles("meta.spec");
  if (meta.size() != 4) throw Error(ErrorCode::kCorruptFile, origin + ": meta.spec");
  const ModelSpec spec = BuildModel(modality, int(meta[0]), meta[1], meta[2]);
  if (expected != nullptr && !(*expected == spec))
    throw Error(ErrorCode::kShapeMismatchOnLoad,
                origin + ": stored " + std::string(ModalityName(modality)) +
                    " network (divisor " + std::to_string(spec.channel_divisor) +
                    ") does not match the requested " +
                    std::string(ModalityName(expected->modality)) +
                    " network (divisor " +
                    std::to_string(expected->channel_divisor) + ")");

  FeatureStats stats;
  if (records.count("stats.audio_mean")) {
    stats.audio_mean = doubles("stats.audio_mean");
    stats.audio_std = doubles("stats.audio_std");
  }
  const std::vector<double> video = doubles("stats.video");
  if (video.size() != 2) throw Error(ErrorCode::kCorruptFile, origin + ": stats.video");
  stats.video_mean = video[0];
  stats.video_std = video[1];

  auto model = std::make_unique<TrainedModel>(spec, std::move(stats));
  auto fill = [&](const std::string& name, nn::Tensor<float>& dst) {
    Record rec = take(name, kF32);
    if (rec.shape != dst.shape())
      throw Error(ErrorCode::kShapeMismatchOnLoad,
                  origin + ": " + name + " has shape " +
                      nn::ShapeString(rec.shape) + ", expected " +
                      nn::ShapeString(dst.shape()));
    std::memcpy(dst.data(), rec.bytes.data(), rec.bytes.size());
  };
  for (auto& p : model->network().Params()) fill(p.name, *p.value);
  for (auto& b : model->network().Buffers()) fill(b.name, *b.value);

  Record ints = take("meta.training", kI64);
  if (ints.bytes.size() != 16) throw Error(ErrorCode::kCorruptFile, origin + ": meta.training");
  int64_t iv[2];
  std::memcpy(iv, ints.bytes.data(), 16);
  model->metadata.epoch = int(iv[0]);
  model->metadata.seed = uint64_t(iv[1]);
  model->metadata.validation_loss = doubles("meta.validation_loss").at(0);
  Record cond = take("meta.train_condition", kU8);
  model->metadata.train_condition.assign(cond.bytes.begin(), cond.bytes.end());
  if (!records.empty())
    throw Error(ErrorCode::kShapeMismatchOnLoad,
                origin + ": unexpected tensor " + records.begin()->first);
  return model;
}

}  // namespace avse::model
