/*
 * png_io.hpp - lossless file I/O for rasters and label maps
 *
 *  Copyright (c) 2026 panosynth contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include "core/image.hpp"

namespace panosynth {

// Label files store invalid pixels with this index.
inline constexpr uint8_t kInvalidLabelValue = 255;

// Any 8/16-bit PNG; gray and palette inputs expand to RGB, alpha is dropped.
// All pixels of the result are valid.
Raster load_image (const std::string &path);

// Gray or paletted PNG: sample values are class indices (255 marks invalid).
// RGB PNG: each color is inverted through the palette.
LabelMap load_labels (const std::string &path, const Palette &palette);

// 8-bit RGB; invalid pixels are written black.
void save_image (const Raster &img, const std::string &path);
// 8-bit gray class indices; invalid pixels are written as 255.
void save_labels (const LabelMap &labels, const std::string &path);

}
