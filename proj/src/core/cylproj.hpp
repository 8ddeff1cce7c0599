/*
 * cylproj.hpp - cylindrical projection of planar camera images
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

#include <optional>

#include "core/image.hpp"

namespace panosynth {

// Focal length of the SYNTHIA-Seqs cameras, in pixels.
inline constexpr double kSynthiaFocalLength = 532.740352;

/*
 * Pinhole camera wrapped onto a vertical cylinder of radius r (pixels) whose
 * axis passes through the optical centre. r defaults to f, which makes the
 * cylinder tangent to the image plane.
 */
class CylindricalCamera
{
public:
    CylindricalCamera (double focal, int width, int height);
    CylindricalCamera (double focal, double radius, int width, int height);

    double focal () const noexcept {
        return _focal;
    }
    double radius () const noexcept {
        return _radius;
    }
    int width () const noexcept {
        return _width;
    }
    int height () const noexcept {
        return _height;
    }

    // Storage coordinate of the image centre: ((w - 1) / 2, (h - 1) / 2).
    double center_x () const noexcept {
        return (_width - 1) * 0.5;
    }
    double center_y () const noexcept {
        return (_height - 1) * 0.5;
    }

    // Half-width in pixels of the warped valid band: r * atan(w / (2 f)).
    double band_half_width () const noexcept;

    friend bool operator== (const CylindricalCamera &, const CylindricalCamera &) = default;

private:
    double _focal;
    double _radius;
    int _width;
    int _height;
};

// Centre-origin image coordinates; column = x + (w - 1) / 2, row = y + (h - 1) / 2.
struct ImagePoint {
    double x = 0.0;
    double y = 0.0;
};

// Plane -> cylinder: x' = r atan(x / f), y' = r y / sqrt(x^2 + f^2).
ImagePoint project_forward (ImagePoint p, const CylindricalCamera &cam) noexcept;

// Cylinder -> plane: x = f tan(x' / r), y = (y' / r) sqrt(x^2 + f^2).
// Throws Singularity when |x'| >= r * pi / 2.
ImagePoint project_backward (ImagePoint q, const CylindricalCamera &cam);

// Non-throwing backward map in storage coordinates; nullopt past the singularity.
std::optional<ImagePoint> backward_source (const CylindricalCamera &cam, int column, int row) noexcept;

/*
 * Backward-mapped warp onto a canvas of the source size. A canvas pixel is
 * valid when its preimage lies inside the source footprint (pixel edges, not
 * centres) and every contributing source pixel is valid. RGB is sampled
 * bilinearly with edge clamping; labels take the nearest class under the same
 * rule, so a raster and its label map always produce identical masks.
 */
Raster warp_to_cylinder (const Raster &img, const CylindricalCamera &cam);
LabelMap warp_to_cylinder (const LabelMap &img, const CylindricalCamera &cam);

struct ColumnSpan {
    int first = 0;
    int last = -1;

    int width () const noexcept {
        return last - first + 1;
    }
};

// Valid columns of the warped canvas along the centre row (the widest row).
ColumnSpan warped_valid_columns (const CylindricalCamera &cam);

}
