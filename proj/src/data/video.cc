// src/data/video.cc

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

#include "avse/data/video.h"

#include <cstring>
#include <fstream>

#include "avse/error.h"

namespace avse::data {

namespace {

void PutU32(std::ostream& out, uint32_t v) {
  const char b[4] = {char(v), char(v >> 8), char(v >> 16), char(v >> 24)};
  out.write(b, 4);
}

uint32_t GetU32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
         uint32_t(b[3]) << 24;
}

}  // namespace

VideoClip ReadVideoFrames(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "VFR1", 4) != 0)
    throw Error(ErrorCode::kCorruptFile, path.string() + ": bad VFR1 magic");
  const uint32_t frames = GetU32(in);
  const uint32_t height = GetU32(in);
  const uint32_t width = GetU32(in);
  if (!in) throw Error(ErrorCode::kCorruptFile, path.string() + ": short header");
  if (height != kVideoSize || width != kVideoSize)
    throw Error(ErrorCode::kDimensionMismatch,
                path.string() + ": frames are " + std::to_string(height) + "x" +
                    std::to_string(width) + ", expected 128x128");
  VideoClip clip;
  clip.pixels.resize(std::size_t(frames) * height * width);
  in.read(reinterpret_cast<char*>(clip.pixels.data()),
          static_cast<std::streamsize>(clip.pixels.size()));
  if (!in || in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::kCorruptFile,
                path.string() + ": payload does not match header");
  return clip;
}

void WriteVideoFrames(const VideoClip& clip, const std::filesystem::path& path) {
  if (clip.height != kVideoSize || clip.width != kVideoSize)
    throw Error(ErrorCode::kDimensionMismatch, "VFR1 frames must be 128x128");
  if (clip.pixels.size() % clip.frame_size() != 0)
    throw Error(ErrorCode::kInvalidArgument, "pixel count is not whole frames");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write("VFR1", 4);
  PutU32(out, static_cast<uint32_t>(clip.num_frames()));
  PutU32(out, static_cast<uint32_t>(clip.height));
  PutU32(out, static_cast<uint32_t>(clip.width));
  out.write(reinterpret_cast<const char*>(clip.pixels.data()),
            static_cast<std::streamsize>(clip.pixels.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace avse::data
