/*
 * stitcher.hpp - four-view cylindrical panorama assembly, rotation and FoV
 *                splitting
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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/cylproj.hpp"
#include "core/image.hpp"

namespace panosynth {

enum class Direction { Left = 0, Forward = 1, Right = 2, Back = 3 };

inline constexpr int kRigViews = 4;

const char *direction_name (Direction d) noexcept;
std::optional<Direction> parse_direction (std::string_view name) noexcept;

struct RigCalibration {
    int d = 0;
    // Placement sequence around the panorama; view k is shifted by k * d.
    std::array<Direction, kRigViews> order {Direction::Left, Direction::Forward, Direction::Right, Direction::Back};
    CylindricalCamera cam {kSynthiaFocalLength, 1280, 760};
    double fov_per_image = 100.0;

    void validate () const;
    std::array<int, kRigViews> offsets () const noexcept {
        return {0, d, 2 * d, 3 * d};
    }
};

struct Panorama {
    Raster rgb;
    std::optional<LabelMap> labels;
    std::array<int, kRigViews> seam_offsets {};
    std::array<std::string, kRigViews> source_ids;
    RigCalibration calib;
    // Accumulated cyclic rotation applied by rotate_start.
    int start_column = 0;

    std::string sidecar_json () const;
};

// Canvas with every pixel invalid.
template <typename Image>
Image make_blank (int width, int height)
{
    Image img (width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.set_invalid (x, y);
    return img;
}

/*
 * Place img onto canvas shifted by (tx, ty). A canvas pixel that is already
 * valid is kept; otherwise a valid img pixel is written. Pixels landing outside
 * the canvas are dropped, or wrapped modulo the canvas width when wrap_x is set.
 */
void compose_into (Raster &canvas, const Raster &img, int tx, int ty, bool wrap_x = false);
void compose_into (LabelMap &canvas, const LabelMap &img, int tx, int ty, bool wrap_x = false);

Raster translate_compose (const Raster &canvas, const Raster &img, int tx, int ty);
LabelMap translate_compose (const LabelMap &canvas, const LabelMap &img, int tx, int ty);

/*
 * images/labels are indexed by Direction. Each view is warped onto the
 * cylinder, shifted by its placement offset and composed first-valid-wins on a
 * 4d-wide canvas whose column 0 is the first valid column of the first placed
 * view; the last view's overhang wraps onto the start.
 *
 * Rows far from the equator stay invalid near seams (the cylindrical warp
 * shrinks image height towards the band edges). A gap on the centre row means
 * d exceeds the views' overlap and raises CoverageGap.
 */
Panorama stitch_panorama (const std::array<Raster, kRigViews> &images,
                          const std::optional<std::array<LabelMap, kRigViews>> &labels,
                          const RigCalibration &calib,
                          const std::array<std::string, kRigViews> &source_ids = {});

// Cyclic left rotation: output column j is input column (j + start_column) mod width.
Panorama rotate_start (const Panorama &p, int start_column);

Panorama resize_panorama (const Panorama &p, int width, int height);

struct Crop {
    Raster rgb;
    std::optional<LabelMap> labels;
};

// fov 360 / 180 / 90 -> 1 / 2 / 4 equal, non-overlapping crops, left to right.
std::vector<Crop> split_by_fov (const Panorama &p, int fov);

template <typename Image>
Image crop (const Image &img, int x0, int y0, int width, int height)
{
    if (x0 < 0 || y0 < 0 || width < 1 || height < 1 || x0 + width > img.width () || y0 + height > img.height ())
        throw Error (ErrorCode::InvalidArgument, "crop rectangle leaves the image");
    Image out (width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.copy_pixel (img, x0 + x, y0 + y, x, y);
    return out;
}

}
