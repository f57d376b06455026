// include/avse/data/video.h

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

#ifndef AVSE_DATA_VIDEO_H_
#define AVSE_DATA_VIDEO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace avse::data {

inline constexpr int kVideoSize = 128;
inline constexpr int kVideoFps = 25;
// Audio frames (hop 160 at 16 kHz) per video frame at 25 fps.
inline constexpr int kAudioFramesPerVideoFrame = 4;

// Sequence of 8-bit grayscale mouth-region frames. Pixel values map to
// [0, 1] by division by 255.
struct VideoClip {
  int height = kVideoSize;
  int width = kVideoSize;
  std::vector<uint8_t> pixels;  // frame-major, then row-major

  std::size_t frame_size() const noexcept {
    return static_cast<std::size_t>(height) * width;
  }
  std::size_t num_frames() const noexcept {
    return frame_size() == 0 ? 0 : pixels.size() / frame_size();
  }
  std::span<const uint8_t> frame(std::size_t i) const {
    return {pixels.data() + i * frame_size(), frame_size()};
  }
  std::span<uint8_t> frame(std::size_t i) {
    return {pixels.data() + i * frame_size(), frame_size()};
  }
  bool operator==(const VideoClip&) const = default;
};

// VFR1 layout: magic "VFR1", uint32 LE num_frames, height, width, then the
// frames as row-major uint8. Throws CorruptFile, DimensionMismatch (frames
// other than 128 x 128).
VideoClip ReadVideoFrames(const std::filesystem::path& path);
void WriteVideoFrames(const VideoClip& clip, const std::filesystem::path& path);

}  // namespace avse::data

#endif  // AVSE_DATA_VIDEO_H_
