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

#include "dexsim/vision/image.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dexsim/common/binary_io.h"
#include "dexsim/common/errors.h"

namespace dexsim::vision {

namespace {
constexpr char kImageMagic[] = "dexsim-image";
}  // namespace

ImageBuffer ImageBuffer::Zeros(int height, int width, int channels) {
  ImageBuffer img;
  img.height = height;
  img.width = width;
  img.channels = channels;
  img.data.assign(static_cast<std::size_t>(height) * width * channels, 0.0);
  img.Validate();
  return img;
}

void ImageBuffer::Validate() const {
  if (height < 1 || width < 1 || channels < 1) {
    throw UsageError("image must be nonempty");
  }
  if (data.size() != static_cast<std::size_t>(height) * width * channels) {
    throw UsageError("image data size does not match its shape");
  }
  for (double v : data) {
    if (!std::isfinite(v)) throw NumericalError("image has non-finite values");
  }
}

ImageBuffer AugmentImage(const ImageBuffer& image, Rng& rng,
                         const AugmentOptions& options, AugmentTrace* trace) {
  image.Validate();
  ImageBuffer out = image;
  std::vector<double>& x = out.data;
  const double n = static_cast<double>(x.size());

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double stddev = std::max(std::sqrt(var / n), kImageStdFloor);
  for (double& v : x) v = (v - mean) / stddev;

  double post_mean = 0.0;
  for (double v : x) post_mean += v;
  post_mean /= n;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double peak_to_peak = *hi - *lo;

  const double contrast =
      options.pinned_contrast
          ? *options.pinned_contrast
          : Uniform(rng, options.contrast_min, options.contrast_max);
  for (double& v : x) v = post_mean + contrast * (v - post_mean);

  const double sigma =
      options.pinned_noise_sigma
          ? *options.pinned_noise_sigma
          : Uniform(rng, 0.0, options.noise_fraction * peak_to_peak);
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : x) v += noise(rng);
  }

  const auto [out_lo, out_hi] = std::minmax_element(x.begin(), x.end());
  out.range_min = *out_lo;
  out.range_max = *out_hi;
  if (trace) {
    double post_var = 0.0;
    for (double v : image.data) {
      const double z = (v - mean) / stddev - post_mean;
      post_var += z * z;
    }
    trace->normalized_mean = post_mean;
    trace->normalized_std = std::sqrt(post_var / n);
    trace->peak_to_peak = peak_to_peak;
    trace->contrast = contrast;
    trace->noise_sigma = sigma;
  }
  return out;
}

void WriteImage(const std::string& path, const ImageBuffer& image) {
  image.Validate();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write image " + path);
  BinaryWriter w(f);
  w.Str(kImageMagic);
  w.I64(image.height);
  w.I64(image.width);
  w.I64(image.channels);
  w.F64(image.range_min);
  w.F64(image.range_max);
  w.Doubles(image.data);
}

ImageBuffer ReadImage(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open image " + path);
  BinaryReader r(f);
  if (r.Str() != kImageMagic) throw FormatError(path + ": not a dexsim image");
  ImageBuffer img;
  img.height = static_cast<int>(r.I64());
  img.width = static_cast<int>(r.I64());
  img.channels = static_cast<int>(r.I64());
  img.range_min = r.F64();
  img.range_max = r.F64();
  img.data = r.Doubles();
  try {
    img.Validate();
  } catch (const std::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return img;
}

}  // namespace dexsim::vision
