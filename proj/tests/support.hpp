/*
 * support.hpp - shared generators and fixtures for the panosynth tests
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
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "core/image.hpp"
#include "core/png_io.hpp"
#include "core/stitcher.hpp"

namespace panosynth::test {

// Scratch directory removed on destruction.
class TempDir
{
public:
    explicit TempDir (const std::string &tag = "panosynth") {
        std::random_device rd;
        const auto base = std::filesystem::temp_directory_path ();
        for (;;) {
            _path = base / (tag + "-" + std::to_string (rd ()));
            if (std::filesystem::create_directory (_path))
                break;
        }
    }
    ~TempDir () {
        std::error_code ec;
        std::filesystem::remove_all (_path, ec);
    }
    TempDir (const TempDir &) = delete;
    TempDir &operator= (const TempDir &) = delete;

    const std::filesystem::path &path () const noexcept {
        return _path;
    }
    std::string str (const std::string &rel = "") const {
        return rel.empty () ? _path.string () : (_path / rel).string ();
    }

private:
    std::filesystem::path _path;
};

inline Raster random_raster (std::mt19937_64 &rng, int w, int h)
{
    std::uniform_int_distribution<int> byte (0, 255);
    std::vector<uint8_t> px (static_cast<std::size_t> (w) * h * 3);
    for (auto &v : px)
        v = static_cast<uint8_t> (byte (rng));
    return Raster (w, h, std::move (px));
}

inline LabelMap random_labels (std::mt19937_64 &rng, int w, int h, int classes = kClassCount)
{
    std::uniform_int_distribution<int> cls (0, classes - 1);
    std::vector<uint8_t> px (static_cast<std::size_t> (w) * h);
    for (auto &v : px)
        v = static_cast<uint8_t> (cls (rng));
    return LabelMap (w, h, std::move (px));
}

/*
 * Smooth texture that is periodic in x with period `width`: a sum of
 * sinusoids with an integer number of horizontal cycles per period, so the
 * strip closes seamlessly into a cylinder.
 */
class PeriodicTexture
{
public:
    PeriodicTexture (int width, int height, uint64_t seed, int terms = 14)
        : _width (width)
        , _height (height)
    {
        std::mt19937_64 rng (seed);
        std::uniform_int_distribution<int> cycles (2, std::max (3, width / 40));
        std::uniform_real_distribution<double> vfreq (0.5, height / 40.0);
        std::uniform_real_distribution<double> phase (0.0, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> amp (0.4, 1.0);
        for (int c = 0; c < 3; ++c) {
            for (int k = 0; k < terms; ++k)
                _terms[c].push_back ({static_cast<double> (cycles (rng)), vfreq (rng), phase (rng), amp (rng)});
            double total = 0.0;
            for (const auto &t : _terms[c])
                total += t.amp;
            _scale[c] = 110.0 / total;
        }
    }

    // Continuous value of channel c at strip coordinates (u, v).
    double value (int c, double u, double v) const noexcept {
        double s = 0.0;
        for (const auto &t : _terms[c])
            s += t.amp * std::sin (2.0 * std::numbers::pi * (t.hcycles * u / _width + t.vcycles * v / _height) + t.phase);
        return 128.0 + _scale[c] * s;
    }

    Raster render () const {
        Raster out (_width, _height);
        for (int y = 0; y < _height; ++y)
            for (int x = 0; x < _width; ++x) {
                Rgb px;
                for (int c = 0; c < 3; ++c)
                    px[c] = static_cast<uint8_t> (std::clamp (std::floor (value (c, x, y) + 0.5), 0.0, 255.0));
                out.set (x, y, px);
            }
        return out;
    }

private:
    struct Term {
        double hcycles;
        double vcycles;
        double phase;
        double amp;
    };
    int _width;
    int _height;
    std::array<std::vector<Term>, 3> _terms;
    std::array<double, 3> _scale {};
};

// Label strip of vertical bands split into four horizontal tiers.
inline LabelMap band_labels (int width, int height, int band = 97)
{
    LabelMap out (width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.set (x, y, static_cast<uint8_t> ((x / band + 3 * (y * 4 / height)) % 14));
    return out;
}

/*
 * Planar pinhole view of a strip wrapped on a cylinder of radius `radius`
 * around the camera. The optical axis hits strip column `center_col`; the
 * strip's middle row is the horizon. Uses the plane-to-cylinder relations
 * u = R atan(x / f), v = R y / sqrt(x^2 + f^2) and samples bilinearly with
 * horizontal wrap.
 */
inline Raster cut_view (const Raster &strip, double center_col, double focal, double radius, int w, int h)
{
    Raster out (w, h);
    const int sw = strip.width ();
    const int sh = strip.height ();
    for (int row = 0; row < h; ++row) {
        const double y = row - (h - 1) * 0.5;
        for (int col = 0; col < w; ++col) {
            const double x = col - (w - 1) * 0.5;
            const double u = center_col + radius * std::atan (x / focal);
            const double v = (sh - 1) * 0.5 + radius * y / std::sqrt (x * x + focal * focal);
            const double vc = std::clamp (v, 0.0, sh - 1.0);
            const double fu = std::floor (u);
            const double fv = std::floor (vc);
            const double ax = u - fu;
            const double ay = vc - fv;
            const int x0 = ((static_cast<int> (fu) % sw) + sw) % sw;
            const int x1 = (x0 + 1) % sw;
            const int y0 = static_cast<int> (fv);
            const int y1 = std::min (y0 + 1, sh - 1);
            Rgb px;
            for (int c = 0; c < 3; ++c) {
                const double top = strip.at (x0, y0)[c] * (1 - ax) + strip.at (x1, y0)[c] * ax;
                const double bot = strip.at (x0, y1)[c] * (1 - ax) + strip.at (x1, y1)[c] * ax;
                px[c] = static_cast<uint8_t> (std::clamp (std::floor (top * (1 - ay) + bot * ay + 0.5), 0.0, 255.0));
            }
            out.set (col, row, px);
        }
    }
    return out;
}

inline LabelMap cut_view (const LabelMap &strip, double center_col, double focal, double radius, int w, int h)
{
    LabelMap out (w, h);
    const int sw = strip.width ();
    const int sh = strip.height ();
    for (int row = 0; row < h; ++row) {
        const double y = row - (h - 1) * 0.5;
        for (int col = 0; col < w; ++col) {
            const double x = col - (w - 1) * 0.5;
            const double u = center_col + radius * std::atan (x / focal);
            const double v = (sh - 1) * 0.5 + radius * y / std::sqrt (x * x + focal * focal);
            const int xi = ((static_cast<int> (std::floor (u + 0.5)) % sw) + sw) % sw;
            const int yi = std::clamp (static_cast<int> (std::floor (v + 0.5)), 0, sh - 1);
            out.set (col, row, strip.at (xi, yi));
        }
    }
    return out;
}

// Four views (indexed left, forward, right, back) centred d strip columns apart.
struct RigViews {
    std::array<Raster, 4> rgb;
    std::array<LabelMap, 4> labels;
};

inline RigViews cut_rig (const Raster &strip, const LabelMap *label_strip, double first_center, int d, double focal,
                         double radius, int w, int h)
{
    RigViews v;
    for (int k = 0; k < 4; ++k) {
        v.rgb[k] = cut_view (strip, first_center + k * d, focal, radius, w, h);
        if (label_strip)
            v.labels[k] = cut_view (*label_strip, first_center + k * d, focal, radius, w, h);
    }
    return v;
}

// Quarter-scale SYNTHIA-like rig: 320x190 views, views 90 degrees apart.
struct SequenceRig {
    int width = 320;
    int height = 190;
    double focal = kSynthiaFocalLength / 4;
    int d = 209;
    uint64_t seed = 7;
};

inline std::string frame_name (int i)
{
    char buf[16];
    std::snprintf (buf, sizeof buf, "%06d", i);
    return buf;
}

/*
 * Writes <root>/<name>/<direction>/{rgb,labels}/<frame>.png, one frame per
 * entry of first_centers (the strip column under the left view's axis).
 */
inline void write_sequence (const std::filesystem::path &root, const std::string &name,
                            const std::vector<double> &first_centers, const SequenceRig &rig = {})
{
    const Raster strip = PeriodicTexture (4 * rig.d, rig.height, rig.seed).render ();
    const LabelMap label_strip = band_labels (4 * rig.d, rig.height, 37);
    for (std::size_t i = 0; i < first_centers.size (); ++i) {
        const RigViews v = cut_rig (strip, &label_strip, first_centers[i], rig.d, rig.focal, rig.focal, rig.width,
                                    rig.height);
        for (int k = 0; k < 4; ++k) {
            const auto dir = root / name / direction_name (static_cast<Direction> (k));
            const std::string file = frame_name (static_cast<int> (i)) + ".png";
            save_image (v.rgb[k], (dir / "rgb" / file).string ());
            save_labels (v.labels[k], (dir / "labels" / file).string ());
        }
    }
}

}
