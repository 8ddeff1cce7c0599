/*
 * image.hpp - RGB rasters, class-index label maps, palettes and resampling
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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/error.hpp"

namespace panosynth {

inline constexpr int kClassCount = 16;

using Rgb = std::array<uint8_t, 3>;

/*
 * Row-major interleaved pixel storage with a per-pixel validity mask.
 * Invalid pixels always hold zeros in every channel, so an invalid RGB pixel
 * renders as black and an invalid label reads as class 0 (but is never
 * counted as one).
 */
template <int Channels>
class PixelGrid
{
public:
    static constexpr int channels = Channels;

    PixelGrid () = default;

    // All pixels valid and zero.
    PixelGrid (int width, int height)
        : _width (width)
        , _height (height)
    {
        if (width < 1 || height < 1)
            throw Error (ErrorCode::InvalidArgument,
                         "image dimensions must be >= 1, got " + std::to_string (width) +
                         "x" + std::to_string (height));
        _data.assign (pixel_count () * Channels, 0);
        _valid.assign (pixel_count (), 1);
    }

    int width () const noexcept {
        return _width;
    }
    int height () const noexcept {
        return _height;
    }
    std::size_t pixel_count () const noexcept {
        return static_cast<std::size_t> (_width) * static_cast<std::size_t> (_height);
    }
    bool empty () const noexcept {
        return _width == 0 || _height == 0;
    }
    bool contains (int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < _width && y < _height;
    }
    std::size_t index (int x, int y) const noexcept {
        return static_cast<std::size_t> (y) * _width + x;
    }

    bool is_valid (int x, int y) const noexcept {
        return _valid[index (x, y)] != 0;
    }
    void set_invalid (int x, int y) noexcept {
        const std::size_t i = index (x, y);
        _valid[i] = 0;
        for (int c = 0; c < Channels; ++c)
            _data[i * Channels + c] = 0;
    }
    std::size_t invalid_count () const noexcept {
        std::size_t n = 0;
        for (uint8_t v : _valid)
            n += v == 0;
        return n;
    }

    std::span<const uint8_t> data () const noexcept {
        return _data;
    }
    std::span<const uint8_t> valid_mask () const noexcept {
        return _valid;
    }

    const uint8_t *pixel (int x, int y) const noexcept {
        return &_data[index (x, y) * Channels];
    }

    // Copies value and validity of src(sx, sy) into (x, y).
    void copy_pixel (const PixelGrid &src, int sx, int sy, int x, int y) noexcept {
        const std::size_t si = src.index (sx, sy);
        const std::size_t di = index (x, y);
        for (int c = 0; c < Channels; ++c)
            _data[di * Channels + c] = src._data[si * Channels + c];
        _valid[di] = src._valid[si];
    }

    friend bool operator== (const PixelGrid &, const PixelGrid &) = default;

protected:
    uint8_t *mutable_pixel (int x, int y) noexcept {
        return &_data[index (x, y) * Channels];
    }
    void set_valid_flag (int x, int y, bool v) noexcept {
        _valid[index (x, y)] = v ? 1 : 0;
    }

    int _width = 0;
    int _height = 0;
    std::vector<uint8_t> _data;
    std::vector<uint8_t> _valid;
};

class Raster : public PixelGrid<3>
{
public:
    Raster () = default;
    Raster (int width, int height, Rgb fill = {0, 0, 0});
    // pixels: width*height RGB triples; valid: empty (all valid) or width*height flags.
    Raster (int width, int height, std::vector<uint8_t> pixels, std::vector<uint8_t> valid = {});

    Rgb at (int x, int y) const noexcept {
        const uint8_t *p = pixel (x, y);
        return {p[0], p[1], p[2]};
    }
    void set (int x, int y, Rgb rgb) noexcept;
};

class LabelMap : public PixelGrid<1>
{
public:
    LabelMap () = default;
    LabelMap (int width, int height, uint8_t fill_class = 0);
    LabelMap (int width, int height, std::vector<uint8_t> classes, std::vector<uint8_t> valid = {});

    uint8_t at (int x, int y) const noexcept {
        return *pixel (x, y);
    }
    // Throws ClassOutOfRange for class >= 16.
    void set (int x, int y, uint8_t cls);
};

struct PaletteEntry {
    std::string name;
    Rgb rgb;
};

class Palette
{
public:
    // Built-in 16-class palette (same content as data/palette.json).
    Palette ();
    explicit Palette (std::array<PaletteEntry, kClassCount> entries);

    static Palette from_json (const std::string &text);
    static Palette load (const std::string &path);
    std::string to_json () const;

    const PaletteEntry &operator[] (int cls) const {
        return _entries.at (cls);
    }
    // Class index for an exact color match, or -1.
    int find (Rgb rgb) const noexcept;

private:
    std::array<PaletteEntry, kClassCount> _entries;
};

struct Sample {
    std::array<double, 3> rgb {0.0, 0.0, 0.0};
    bool valid = false;
};

/*
 * Bilinear sample at storage coordinates (pixel centres on integers).
 * Neighbours with zero weight do not contribute; the sample is invalid when any
 * contributing neighbour is out of bounds or invalid.
 */
Sample sample_bilinear (const Raster &img, double x, double y) noexcept;

// True when every neighbour contributing to a bilinear sample at (x, y) is
// inside the grid and valid. Shared by RGB and label resampling so both keep
// identical masks.
template <int C>
bool bilinear_footprint_valid (const PixelGrid<C> &img, double x, double y) noexcept
{
    if (!(x > -1.0 && y > -1.0 && x < img.width () && y < img.height ()))
        return false;
    const double fx0 = std::floor (x);
    const double fy0 = std::floor (y);
    const int x0 = static_cast<int> (fx0);
    const int y0 = static_cast<int> (fy0);
    const bool use_x1 = x != fx0;
    const bool use_y1 = y != fy0;
    for (int dy = 0; dy <= (use_y1 ? 1 : 0); ++dy) {
        for (int dx = 0; dx <= (use_x1 ? 1 : 0); ++dx) {
            const int sx = x0 + dx;
            const int sy = y0 + dy;
            if (!img.contains (sx, sy) || !img.is_valid (sx, sy))
                return false;
        }
    }
    return true;
}

/*
 * A grid covers the open area (-0.5, w - 0.5) x (-0.5, h - 0.5): every pixel is
 * a unit square around its centre. Points inside it are clamped onto the
 * centre lattice so edge pixels extend to the image border; nullopt outside.
 */
template <int C>
std::optional<std::pair<double, double>> clamp_to_footprint (const PixelGrid<C> &img, double x, double y) noexcept
{
    if (!(x > -0.5 && y > -0.5 && x < img.width () - 0.5 && y < img.height () - 0.5))
        return std::nullopt;
    return std::pair<double, double> {std::clamp (x, 0.0, img.width () - 1.0),
                                      std::clamp (y, 0.0, img.height () - 1.0)};
}

// Nearest source pixel for a footprint that bilinear_footprint_valid accepted.
template <int C>
std::pair<int, int> nearest_in_footprint (const PixelGrid<C> &img, double x, double y) noexcept
{
    int nx = static_cast<int> (std::floor (x + 0.5));
    int ny = static_cast<int> (std::floor (y + 0.5));
    nx = std::clamp (nx, 0, img.width () - 1);
    ny = std::clamp (ny, 0, img.height () - 1);
    return {nx, ny};
}

Raster resize (const Raster &img, int new_width, int new_height);
LabelMap resize (const LabelMap &img, int new_width, int new_height);

Raster render_labels (const LabelMap &labels, const Palette &palette);

}
