/*
 * image.cpp - RGB rasters, class-index label maps, palettes and resampling
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

#include "core/image.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace panosynth {

namespace {

void check_buffer_sizes (int width, int height, int channels,
                         const std::vector<uint8_t> &data, const std::vector<uint8_t> &valid)
{
    const std::size_t n = static_cast<std::size_t> (width) * static_cast<std::size_t> (height);
    if (data.size () != n * channels)
        throw Error (ErrorCode::DimensionMismatch,
                     "pixel buffer holds " + std::to_string (data.size ()) + " bytes, expected " +
                     std::to_string (n * channels));
    if (!valid.empty () && valid.size () != n)
        throw Error (ErrorCode::DimensionMismatch, "validity mask size does not match image");
}

std::array<PaletteEntry, kClassCount> default_entries ()
{
    return {{
        {"sky", {128, 128, 128}},
        {"building", {128, 0, 0}},
        {"road", {128, 64, 128}},
        {"sidewalk", {0, 0, 192}},
        {"fence", {64, 64, 128}},
        {"vegetation", {128, 128, 0}},
        {"pole", {192, 192, 128}},
        {"car", {64, 0, 128}},
        {"traffic sign", {192, 128, 128}},
        {"pedestrian", {64, 64, 0}},
        {"bicycle", {0, 128, 192}},
        {"lane-marking", {0, 172, 0}},
        {"traffic light", {0, 128, 128}},
        {"terrain", {152, 251, 152}},
        {"reserved-1", {220, 20, 60}},
        {"reserved-2", {255, 255, 255}},
    }};
}

}

Raster::Raster (int width, int height, Rgb fill)
    : PixelGrid<3> (width, height)
{
    for (std::size_t i = 0; i < pixel_count (); ++i) {
        _data[i * 3 + 0] = fill[0];
        _data[i * 3 + 1] = fill[1];
        _data[i * 3 + 2] = fill[2];
    }
}

Raster::Raster (int width, int height, std::vector<uint8_t> pixels, std::vector<uint8_t> valid)
    : PixelGrid<3> (width, height)
{
    check_buffer_sizes (width, height, 3, pixels, valid);
    _data = std::move (pixels);
    if (!valid.empty ()) {
        _valid = std::move (valid);
        for (std::size_t i = 0; i < _valid.size (); ++i) {
            if (!_valid[i])
                _data[i * 3] = _data[i * 3 + 1] = _data[i * 3 + 2] = 0;
            else
                _valid[i] = 1;
        }
    }
}

void
Raster::set (int x, int y, Rgb rgb) noexcept
{
    uint8_t *p = mutable_pixel (x, y);
    p[0] = rgb[0];
    p[1] = rgb[1];
    p[2] = rgb[2];
    set_valid_flag (x, y, true);
}

LabelMap::LabelMap (int width, int height, uint8_t fill_class)
    : PixelGrid<1> (width, height)
{
    if (fill_class >= kClassCount)
        throw Error (ErrorCode::ClassOutOfRange, "class index " + std::to_string (fill_class) + " >= 16");
    std::fill (_data.begin (), _data.end (), fill_class);
}

LabelMap::LabelMap (int width, int height, std::vector<uint8_t> classes, std::vector<uint8_t> valid)
    : PixelGrid<1> (width, height)
{
    check_buffer_sizes (width, height, 1, classes, valid);
    for (uint8_t c : classes)
        if (c >= kClassCount)
            throw Error (ErrorCode::ClassOutOfRange, "class index " + std::to_string (c) + " >= 16");
    _data = std::move (classes);
    if (!valid.empty ()) {
        _valid = std::move (valid);
        for (std::size_t i = 0; i < _valid.size (); ++i) {
            if (!_valid[i])
                _data[i] = 0;
            else
                _valid[i] = 1;
        }
    }
}

void
LabelMap::set (int x, int y, uint8_t cls)
{
    if (cls >= kClassCount)
        throw Error (ErrorCode::ClassOutOfRange, "class index " + std::to_string (cls) + " >= 16");
    *mutable_pixel (x, y) = cls;
    set_valid_flag (x, y, true);
}

Palette::Palette ()
    : Palette (default_entries ())
{
}

Palette::Palette (std::array<PaletteEntry, kClassCount> entries)
    : _entries (std::move (entries))
{
    std::set<Rgb> seen;
    for (const auto &e : _entries)
        if (!seen.insert (e.rgb).second)
            throw Error (ErrorCode::Config, "palette colors must be distinct (duplicate for '" + e.name + "')");
}

Palette
Palette::from_json (const std::string &text)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse (text);
    } catch (const json::parse_error &e) {
        throw Error (ErrorCode::Config, std::string ("palette is not valid JSON: ") + e.what ());
    }
    if (!doc.is_array () || doc.size () != kClassCount)
        throw Error (ErrorCode::Config, "palette must be a JSON array of 16 entries");

    std::array<PaletteEntry, kClassCount> entries;
    std::array<bool, kClassCount> filled {};
    for (const auto &item : doc) {
        if (!item.is_object () || !item.contains ("index") || !item.contains ("rgb"))
            throw Error (ErrorCode::Config, "palette entry needs 'index' and 'rgb'");
        for (auto it = item.begin (); it != item.end (); ++it)
            if (it.key () != "index" && it.key () != "name" && it.key () != "rgb")
                throw Error (ErrorCode::Config, "unknown palette key '" + it.key () + "'");
        const auto &idx = item["index"];
        if (!idx.is_number_integer () || idx.get<int> () < 0 || idx.get<int> () >= kClassCount)
            throw Error (ErrorCode::Config, "palette index must be an integer in 0..15");
        const int i = idx.get<int> ();
        if (filled[i])
            throw Error (ErrorCode::Config, "palette index " + std::to_string (i) + " listed twice");
        const auto &rgb = item["rgb"];
        if (!rgb.is_array () || rgb.size () != 3)
            throw Error (ErrorCode::Config, "palette rgb must be [r, g, b]");
        for (int c = 0; c < 3; ++c) {
            if (!rgb[c].is_number_integer () || rgb[c].get<int> () < 0 || rgb[c].get<int> () > 255)
                throw Error (ErrorCode::Config, "palette rgb components must be integers in 0..255");
            entries[i].rgb[c] = static_cast<uint8_t> (rgb[c].get<int> ());
        }
        entries[i].name = item.value ("name", "class-" + std::to_string (i));
        filled[i] = true;
    }
    return Palette (std::move (entries));
}

Palette
Palette::load (const std::string &path)
{
    std::ifstream in (path);
    if (!in)
        throw Error (ErrorCode::Io, "cannot open palette file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf ();
    return from_json (ss.str ());
}

std::string
Palette::to_json () const
{
    nlohmann::json doc = nlohmann::json::array ();
    for (int i = 0; i < kClassCount; ++i) {
        const auto &e = _entries[i];
        doc.push_back ({{"index", i}, {"name", e.name}, {"rgb", {e.rgb[0], e.rgb[1], e.rgb[2]}}});
    }
    return doc.dump (2) + "\n";
}

int
Palette::find (Rgb rgb) const noexcept
{
    for (int i = 0; i < kClassCount; ++i)
        if (_entries[i].rgb == rgb)
            return i;
    return -1;
}

Sample
sample_bilinear (const Raster &img, double x, double y) noexcept
{
    Sample s;
    if (!bilinear_footprint_valid (img, x, y))
        return s;

    const double fx0 = std::floor (x);
    const double fy0 = std::floor (y);
    const int x0 = static_cast<int> (fx0);
    const int y0 = static_cast<int> (fy0);
    const double ax = x - fx0;
    const double ay = y - fy0;
    const int x1 = ax > 0.0 ? x0 + 1 : x0;
    const int y1 = ay > 0.0 ? y0 + 1 : y0;

    const uint8_t *p00 = img.pixel (x0, y0);
    const uint8_t *p10 = img.pixel (x1, y0);
    const uint8_t *p01 = img.pixel (x0, y1);
    const uint8_t *p11 = img.pixel (x1, y1);
    for (int c = 0; c < 3; ++c) {
        const double top = p00[c] + (p10[c] - p00[c]) * ax;
        const double bottom = p01[c] + (p11[c] - p01[c]) * ax;
        s.rgb[c] = top + (bottom - top) * ay;
    }
    s.valid = true;
    return s;
}

namespace {

uint8_t to_byte (double v) noexcept
{
    return static_cast<uint8_t> (std::clamp (std::floor (v + 0.5), 0.0, 255.0));
}

// Half-pixel-centred source coordinate, clamped to the edge pixels.
double source_coord (int dst, double scale, int src_extent) noexcept
{
    const double s = (dst + 0.5) * scale - 0.5;
    return std::clamp (s, 0.0, static_cast<double> (src_extent - 1));
}

void check_target (int w, int h)
{
    if (w < 1 || h < 1)
        throw Error (ErrorCode::InvalidArgument,
                     "resize target must be >= 1x1, got " + std::to_string (w) + "x" + std::to_string (h));
}

}

Raster
resize (const Raster &img, int new_width, int new_height)
{
    check_target (new_width, new_height);
    if (new_width == img.width () && new_height == img.height ())
        return img;

    Raster out (new_width, new_height);
    const double sx = static_cast<double> (img.width ()) / new_width;
    const double sy = static_cast<double> (img.height ()) / new_height;
    for (int y = 0; y < new_height; ++y) {
        const double src_y = source_coord (y, sy, img.height ());
        for (int x = 0; x < new_width; ++x) {
            const Sample s = sample_bilinear (img, source_coord (x, sx, img.width ()), src_y);
            if (s.valid)
                out.set (x, y, {to_byte (s.rgb[0]), to_byte (s.rgb[1]), to_byte (s.rgb[2])});
            else
                out.set_invalid (x, y);
        }
    }
    return out;
}

LabelMap
resize (const LabelMap &img, int new_width, int new_height)
{
    check_target (new_width, new_height);
    if (new_width == img.width () && new_height == img.height ())
        return img;

    LabelMap out (new_width, new_height);
    const double sx = static_cast<double> (img.width ()) / new_width;
    const double sy = static_cast<double> (img.height ()) / new_height;
    for (int y = 0; y < new_height; ++y) {
        const double src_y = source_coord (y, sy, img.height ());
        for (int x = 0; x < new_width; ++x) {
            const double src_x = source_coord (x, sx, img.width ());
            if (!bilinear_footprint_valid (img, src_x, src_y)) {
                out.set_invalid (x, y);
                continue;
            }
            const auto [nx, ny] = nearest_in_footprint (img, src_x, src_y);
            out.copy_pixel (img, nx, ny, x, y);
        }
    }
    return out;
}

Raster
render_labels (const LabelMap &labels, const Palette &palette)
{
    Raster out (labels.width (), labels.height ());
    for (int y = 0; y < labels.height (); ++y)
        for (int x = 0; x < labels.width (); ++x) {
            if (labels.is_valid (x, y))
                out.set (x, y, palette[labels.at (x, y)].rgb);
            else
                out.set_invalid (x, y);
        }
    return out;
}

const char *
error_code_name (ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument:
        return "invalid argument";
    case ErrorCode::Io:
        return "i/o error";
    case ErrorCode::UnsupportedFormat:
        return "unsupported format";
    case ErrorCode::CorruptData:
        return "corrupt data";
    case ErrorCode::DimensionMismatch:
        return "dimension mismatch";
    case ErrorCode::Singularity:
        return "projection singularity";
    case ErrorCode::PaletteMismatch:
        return "palette mismatch";
    case ErrorCode::ClassOutOfRange:
        return "class out of range";
    case ErrorCode::InvalidRegion:
        return "invalid region";
    case ErrorCode::NoCandidates:
        return "no match candidates";
    case ErrorCode::CoverageGap:
        return "coverage gap";
    case ErrorCode::EmptyInput:
        return "empty input";
    case ErrorCode::Config:
        return "configuration error";
    }
    return "unknown error";
}

}
