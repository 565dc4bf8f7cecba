// Copyright 2026 The occfilter Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Raster file I/O. Formats are detected from the file contents:
//   PNG  8/16-bit gray or RGB(A)            (libpng)
//   JPEG baseline/progressive               (libjpeg, colour images only)
//   PGM  P2/P5, maxval up to 65535          (16-bit samples big-endian)
//   PPM  P3/P6, maxval 255
//   PFM  Pf (single channel float32)        (rows stored bottom-to-top)

#ifndef OCCFILTER_IMAGE_IO_H_
#define OCCFILTER_IMAGE_IO_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "occfilter/raster.h"

namespace occfilter {

class ImageIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Single-channel samples as read from disk (before any scaling).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> values;
};

GrayImage ReadGray(const std::string& path);

// depth = stored value * scale. Rejects negative or non-finite depth.
DepthMap LoadDepth(const std::string& path, double scale = 1.0);
// Writes round(depth / scale) as 16-bit PGM; values must fit in [0, 65535].
void SaveDepthPgm(const std::string& path, const DepthMap& depth,
                  double scale = 1.0);

// Any non-zero sample is set.
BinaryMask LoadMask(const std::string& path);
// 0 / 255 8-bit PGM.
void SaveMaskPgm(const std::string& path, const BinaryMask& mask);

// score = stored value * scale (PFM files are usually stored with scale 1).
ScoreMap LoadScoreMap(const std::string& path, double scale = 1.0);
void SaveScoreMapPfm(const std::string& path, const ScoreMap& scores);

RgbImage LoadRgb(const std::string& path);
void SaveRgbPng(const std::string& path, const RgbImage& image);
void SaveGrayPng16(const std::string& path, int width, int height,
                   const std::vector<std::uint16_t>& values);

}  // namespace occfilter

#endif  // OCCFILTER_IMAGE_IO_H_
