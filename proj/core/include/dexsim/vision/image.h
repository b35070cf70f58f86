// Copyright 2026 The dexsim Authors
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

#ifndef DEXSIM_VISION_IMAGE_H_
#define DEXSIM_VISION_IMAGE_H_

#include <optional>
#include <string>
#include <vector>

#include "dexsim/common/rng.h"

namespace dexsim::vision {

// H x W x C values, row-major with interleaved channels.
struct ImageBuffer {
  int height = 0;
  int width = 0;
  int channels = 3;
  double range_min = 0.0;  // nominal value range of the data
  double range_max = 1.0;
  std::vector<double> data;

  static ImageBuffer Zeros(int height, int width, int channels = 3);
  double& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  void Validate() const;
};

struct AugmentOptions {
  double contrast_min = 0.5;
  double contrast_max = 1.5;
  double noise_fraction = 0.1;  // of the normalized peak-to-peak range
  std::optional<double> pinned_contrast;
  std::optional<double> pinned_noise_sigma;
};

struct AugmentTrace {
  double normalized_mean = 0.0;
  double normalized_std = 0.0;
  double peak_to_peak = 0.0;
  double contrast = 1.0;
  double noise_sigma = 0.0;
};

inline constexpr double kImageStdFloor = 1e-8;

// Normalize to zero mean and unit variance, scale contrast about the mean,
// then add i.i.d. Gaussian noise.
ImageBuffer AugmentImage(const ImageBuffer& image, Rng& rng,
                         const AugmentOptions& options = {},
                         AugmentTrace* trace = nullptr);

// Flat binary: magic, H, W, C, range min/max, then H*W*C doubles.
void WriteImage(const std::string& path, const ImageBuffer& image);
ImageBuffer ReadImage(const std::string& path);

}  // namespace dexsim::vision

#endif  // DEXSIM_VISION_IMAGE_H_
