/*
 * stitcher.cpp - four-view cylindrical panorama assembly, rotation and FoV
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

#include "core/stitcher.hpp"

#include <future>
#include <set>

#include <json.hpp>

namespace panosynth {

namespace {

template <typename Image>
void compose_impl (Image &canvas, const Image &img, int tx, int ty, bool wrap_x)
{
    const int cw = canvas.width ();
    for (int y = 0; y < img.height (); ++y) {
        const int cy = y + ty;
        if (cy < 0 || cy >= canvas.height ())
            continue;
        for (int x = 0; x < img.width (); ++x) {
            if (!img.is_valid (x, y))
                continue;
            int cx = x + tx;
            if (wrap_x)
                cx = ((cx % cw) + cw) % cw;
            else if (cx < 0 || cx >= cw)
                continue;
            if (canvas.is_valid (cx, cy))
                continue;
            canvas.copy_pixel (img, x, y, cx, cy);
        }
    }
}

template <typename Image>
Image rotate_columns (const Image &img, int start)
{
    Image out (img.width (), img.height ());
    for (int y = 0; y < img.height (); ++y)
        for (int x = 0; x < img.width (); ++x)
            out.copy_pixel (img, (x + start) % img.width (), y, x, y);
    return out;
}

}

const char *
direction_name (Direction d) noexcept
{
    switch (d) {
    case Direction::Left:
        return "left";
    case Direction::Forward:
        return "forward";
    case Direction::Right:
        return "right";
    case Direction::Back:
        return "back";
    }
    return "?";
}

std::optional<Direction>
parse_direction (std::string_view name) noexcept
{
    for (Direction d : {Direction::Left, Direction::Forward, Direction::Right, Direction::Back})
        if (name == direction_name (d))
            return d;
    return std::nullopt;
}

void
RigCalibration::validate () const
{
    if (d <= 0)
        throw Error (ErrorCode::InvalidArgument, "distance parameter d must be > 0, got " + std::to_string (d));
    std::set<Direction> seen (order.begin (), order.end ());
    if (seen.size () != kRigViews)
        throw Error (ErrorCode::InvalidArgument, "direction order must be a permutation of left/forward/right/back");
    if (!(fov_per_image * kRigViews >= 360.0))
        throw Error (ErrorCode::InvalidArgument, "four views of the given FoV cannot cover 360 degrees");
}

std::string
Panorama::sidecar_json () const
{
    nlohmann::json doc;
    doc["d"] = calib.d;
    nlohmann::json order = nlohmann::json::array ();
    for (Direction dir : calib.order)
        order.push_back (direction_name (dir));
    doc["order"] = order;
    doc["f"] = calib.cam.focal ();
    doc["r"] = calib.cam.radius ();
    doc["source_ids"] = source_ids;
    doc["seam_offsets"] = seam_offsets;
    doc["start_column"] = start_column;
    doc["width"] = rgb.width ();
    doc["height"] = rgb.height ();
    return doc.dump (2) + "\n";
}

void
compose_into (Raster &canvas, const Raster &img, int tx, int ty, bool wrap_x)
{
    compose_impl (canvas, img, tx, ty, wrap_x);
}

void
compose_into (LabelMap &canvas, const LabelMap &img, int tx, int ty, bool wrap_x)
{
    compose_impl (canvas, img, tx, ty, wrap_x);
}

Raster
translate_compose (const Raster &canvas, const Raster &img, int tx, int ty)
{
    Raster out = canvas;
    compose_impl (out, img, tx, ty, false);
    return out;
}

LabelMap
translate_compose (const LabelMap &canvas, const LabelMap &img, int tx, int ty)
{
    LabelMap out = canvas;
    compose_impl (out, img, tx, ty, false);
    return out;
}

Panorama
stitch_panorama (const std::array<Raster, kRigViews> &images,
                 const std::optional<std::array<LabelMap, kRigViews>> &labels,
                 const RigCalibration &calib,
                 const std::array<std::string, kRigViews> &source_ids)
{
    calib.validate ();
    const CylindricalCamera &cam = calib.cam;
    for (int i = 0; i < kRigViews; ++i) {
        if (images[i].width () != cam.width () || images[i].height () != cam.height ())
            throw Error (ErrorCode::DimensionMismatch,
                         std::string (direction_name (static_cast<Direction> (i))) + " image is " +
                         std::to_string (images[i].width ()) + "x" + std::to_string (images[i].height ()) +
                         ", camera expects " + std::to_string (cam.width ()) + "x" + std::to_string (cam.height ()));
        if (labels && ((*labels)[i].width () != cam.width () || (*labels)[i].height () != cam.height ()))
            throw Error (ErrorCode::DimensionMismatch,
                         std::string (direction_name (static_cast<Direction> (i))) +
                         " label map does not match its image size");
    }

    // The four warps are independent.
    std::array<std::future<Raster>, kRigViews> warped_rgb;
    for (int i = 0; i < kRigViews; ++i)
        warped_rgb[i] = std::async (std::launch::async, [&images, &cam, i] {
            return warp_to_cylinder (images[i], cam);
        });
    std::array<LabelMap, kRigViews> warped_labels;
    if (labels)
        for (int i = 0; i < kRigViews; ++i)
            warped_labels[i] = warp_to_cylinder ((*labels)[i], cam);

    const int width = kRigViews * calib.d;
    const int origin = warped_valid_columns (cam).first;

    Panorama pano;
    pano.calib = calib;
    pano.seam_offsets = calib.offsets ();
    pano.rgb = make_blank<Raster> (width, cam.height ());
    if (labels)
        pano.labels = make_blank<LabelMap> (width, cam.height ());

    std::array<Raster, kRigViews> rgb;
    for (int i = 0; i < kRigViews; ++i)
        rgb[i] = warped_rgb[i].get ();

    for (int k = 0; k < kRigViews; ++k) {
        const int view = static_cast<int> (calib.order[k]);
        const int tx = pano.seam_offsets[k] - origin;
        compose_into (pano.rgb, rgb[view], tx, 0, true);
        if (labels)
            compose_into (*pano.labels, warped_labels[view], tx, 0, true);
        pano.source_ids[k] = source_ids[view];
    }

    const int h = cam.height ();
    for (int row : {(h - 1) / 2, h / 2})
        for (int x = 0; x < width; ++x)
            if (!pano.rgb.is_valid (x, row))
                throw Error (ErrorCode::CoverageGap,
                             "panorama column " + std::to_string (x) + " is uncovered on the centre row; d=" +
                             std::to_string (calib.d) + " exceeds the views' overlap");
    return pano;
}

Panorama
rotate_start (const Panorama &p, int start_column)
{
    const int w = p.rgb.width ();
    if (start_column < 0 || start_column >= w)
        throw Error (ErrorCode::InvalidArgument,
                     "start column " + std::to_string (start_column) + " outside [0, " + std::to_string (w) + ")");
    Panorama out = p;
    if (start_column == 0)
        return out;
    out.rgb = rotate_columns (p.rgb, start_column);
    if (p.labels)
        out.labels = rotate_columns (*p.labels, start_column);
    out.start_column = (p.start_column + start_column) % w;
    return out;
}

Panorama
resize_panorama (const Panorama &p, int width, int height)
{
    Panorama out = p;
    out.rgb = resize (p.rgb, width, height);
    if (p.labels)
        out.labels = resize (*p.labels, width, height);
    return out;
}

std::vector<Crop>
split_by_fov (const Panorama &p, int fov)
{
    if (fov != 90 && fov != 180 && fov != 360)
        throw Error (ErrorCode::InvalidArgument,
                     "unsupported FoV " + std::to_string (fov) + " (expected 90, 180 or 360)");
    const int parts = 360 / fov;
    const int w = p.rgb.width ();
    if (w % (parts * 16) != 0)
        throw Error (ErrorCode::InvalidArgument,
                     "panorama width " + std::to_string (w) + " is not divisible by " + std::to_string (parts * 16) +
                     "; resize before splitting");
    const int part_w = w / parts;
    std::vector<Crop> out;
    for (int k = 0; k < parts; ++k) {
        Crop c {crop (p.rgb, k * part_w, 0, part_w, p.rgb.height ()), std::nullopt};
        if (p.labels)
            c.labels = crop (*p.labels, k * part_w, 0, part_w, p.labels->height ());
        out.push_back (std::move (c));
    }
    return out;
}

}
