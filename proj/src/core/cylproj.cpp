/*
 * cylproj.cpp - cylindrical projection of planar camera images
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

#include "core/cylproj.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace panosynth {

namespace {

void check_positive (double v, const char *what)
{
    if (!(v > 0.0) || !std::isfinite (v)) {
        std::ostringstream msg;
        msg << what << " must be a positive finite number, got " << v;
        throw Error (ErrorCode::InvalidArgument, msg.str ());
    }
}

template <typename Image>
void check_dims (const Image &img, const CylindricalCamera &cam)
{
    if (img.width () != cam.width () || img.height () != cam.height ())
        throw Error (ErrorCode::DimensionMismatch,
                     "image is " + std::to_string (img.width ()) + "x" + std::to_string (img.height ()) +
                     " but camera expects " + std::to_string (cam.width ()) + "x" +
                     std::to_string (cam.height ()));
}

}

CylindricalCamera::CylindricalCamera (double focal, int width, int height)
    : CylindricalCamera (focal, focal, width, height)
{
}

CylindricalCamera::CylindricalCamera (double focal, double radius, int width, int height)
    : _focal (focal)
    , _radius (radius)
    , _width (width)
    , _height (height)
{
    check_positive (focal, "focal length");
    check_positive (radius, "cylinder radius");
    if (width < 1 || height < 1)
        throw Error (ErrorCode::InvalidArgument, "camera image size must be >= 1x1");
}

double
CylindricalCamera::band_half_width () const noexcept
{
    return _radius * std::atan (_width / (2.0 * _focal));
}

ImagePoint
project_forward (ImagePoint p, const CylindricalCamera &cam) noexcept
{
    const double f = cam.focal ();
    const double r = cam.radius ();
    return {r * std::atan (p.x / f), r * p.y / std::hypot (p.x, f)};
}

ImagePoint
project_backward (ImagePoint q, const CylindricalCamera &cam)
{
    const double f = cam.focal ();
    const double r = cam.radius ();
    if (!(std::abs (q.x) < r * std::numbers::pi / 2.0)) {
        std::ostringstream msg;
        msg << "cylinder coordinate x'=" << q.x << " is at or beyond the singularity r*pi/2="
            << r * std::numbers::pi / 2.0;
        throw Error (ErrorCode::Singularity, msg.str ());
    }
    const double x = f * std::tan (q.x / r);
    return {x, q.y / r * std::hypot (x, f)};
}

std::optional<ImagePoint>
backward_source (const CylindricalCamera &cam, int column, int row) noexcept
{
    const double r = cam.radius ();
    const double xp = column - cam.center_x ();
    if (!(std::abs (xp) < r * std::numbers::pi / 2.0))
        return std::nullopt;
    const double x = cam.focal () * std::tan (xp / r);
    const double yp = row - cam.center_y ();
    const double y = yp / r * std::hypot (x, cam.focal ());
    return ImagePoint {x + cam.center_x (), y + cam.center_y ()};
}

Raster
warp_to_cylinder (const Raster &img, const CylindricalCamera &cam)
{
    check_dims (img, cam);
    Raster out (img.width (), img.height ());
    for (int row = 0; row < img.height (); ++row) {
        for (int col = 0; col < img.width (); ++col) {
            const auto src = backward_source (cam, col, row);
            const auto at = src ? clamp_to_footprint (img, src->x, src->y) : std::nullopt;
            const Sample s = at ? sample_bilinear (img, at->first, at->second) : Sample {};
            if (!s.valid) {
                out.set_invalid (col, row);
                continue;
            }
            Rgb rgb;
            for (int c = 0; c < 3; ++c)
                rgb[c] = static_cast<uint8_t> (std::clamp (std::floor (s.rgb[c] + 0.5), 0.0, 255.0));
            out.set (col, row, rgb);
        }
    }
    return out;
}

LabelMap
warp_to_cylinder (const LabelMap &img, const CylindricalCamera &cam)
{
    check_dims (img, cam);
    LabelMap out (img.width (), img.height ());
    for (int row = 0; row < img.height (); ++row) {
        for (int col = 0; col < img.width (); ++col) {
            const auto src = backward_source (cam, col, row);
            const auto at = src ? clamp_to_footprint (img, src->x, src->y) : std::nullopt;
            if (!at || !bilinear_footprint_valid (img, at->first, at->second)) {
                out.set_invalid (col, row);
                continue;
            }
            const auto [nx, ny] = nearest_in_footprint (img, at->first, at->second);
            out.copy_pixel (img, nx, ny, col, row);
        }
    }
    return out;
}

ColumnSpan
warped_valid_columns (const CylindricalCamera &cam)
{
    const int row = (cam.height () - 1) / 2;
    const double max_x = cam.width () - 0.5;
    const double max_y = cam.height () - 0.5;
    ColumnSpan span {0, -1};
    bool found = false;
    for (int col = 0; col < cam.width (); ++col) {
        const auto src = backward_source (cam, col, row);
        const bool inside = src && src->x > -0.5 && src->x < max_x && src->y > -0.5 && src->y < max_y;
        if (!inside)
            continue;
        if (!found)
            span.first = col;
        span.last = col;
        found = true;
    }
    return span;
}

}
