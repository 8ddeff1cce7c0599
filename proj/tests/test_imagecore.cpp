/*
 * test_imagecore.cpp - rasters, label maps, palettes, resampling and PNG I/O
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

#include <doctest.h>

#include <fstream>
#include <set>

#include <json.hpp>
#include <png.h>

#include "core/png_io.hpp"
#include "support.hpp"

using namespace panosynth;
using panosynth::test::TempDir;

namespace {

ErrorCode code_of (auto &&fn)
{
    try {
        fn ();
    } catch (const Error &e) {
        return e.code ();
    }
    FAIL ("expected an Error");
    return ErrorCode::InvalidArgument;
}

// Writes an RGB PNG directly with libpng, bypassing save_image.
void write_rgb_png (const std::string &path, int w, int h, const std::vector<uint8_t> &rgb)
{
    FILE *f = std::fopen (path.c_str (), "wb");
    REQUIRE (f);
    png_structp png = png_create_write_struct (PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct (png);
    png_init_io (png, f);
    png_set_IHDR (png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                  PNG_FILTER_TYPE_DEFAULT);
    png_write_info (png, info);
    for (int y = 0; y < h; ++y)
        png_write_row (png, const_cast<png_bytep> (&rgb[static_cast<std::size_t> (y) * w * 3]));
    png_write_end (png, nullptr);
    png_destroy_write_struct (&png, &info);
    std::fclose (f);
}

void write_gray_png (const std::string &path, int w, int h, const std::vector<uint8_t> &gray)
{
    FILE *f = std::fopen (path.c_str (), "wb");
    REQUIRE (f);
    png_structp png = png_create_write_struct (PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct (png);
    png_init_io (png, f);
    png_set_IHDR (png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                  PNG_FILTER_TYPE_DEFAULT);
    png_write_info (png, info);
    for (int y = 0; y < h; ++y)
        png_write_row (png, const_cast<png_bytep> (&gray[static_cast<std::size_t> (y) * w]));
    png_write_end (png, nullptr);
    png_destroy_write_struct (&png, &info);
    std::fclose (f);
}

}

TEST_CASE ("raster construction, set and invalidation")
{
    Raster r (4, 3, Rgb {10, 20, 30});
    CHECK (r.width () == 4);
    CHECK (r.height () == 3);
    CHECK (r.invalid_count () == 0);
    CHECK (r.at (3, 2) == Rgb {10, 20, 30});

    r.set_invalid (1, 1);
    CHECK_FALSE (r.is_valid (1, 1));
    CHECK (r.at (1, 1) == Rgb {0, 0, 0});
    CHECK (r.invalid_count () == 1);

    r.set (1, 1, {1, 2, 3});
    CHECK (r.is_valid (1, 1));
    CHECK (r.at (1, 1) == Rgb {1, 2, 3});

    CHECK (code_of ([] { Raster (0, 3); }) == ErrorCode::InvalidArgument);
    CHECK (code_of ([] { Raster (2, 2, std::vector<uint8_t> (11)); }) == ErrorCode::DimensionMismatch);
    CHECK (code_of ([] { Raster (2, 2, std::vector<uint8_t> (12), std::vector<uint8_t> (3)); }) ==
           ErrorCode::DimensionMismatch);
}

TEST_CASE ("raster buffer constructor zeroes invalid pixels")
{
    Raster r (2, 1, std::vector<uint8_t> {9, 9, 9, 7, 7, 7}, std::vector<uint8_t> {1, 0});
    CHECK (r.at (0, 0) == Rgb {9, 9, 9});
    CHECK_FALSE (r.is_valid (1, 0));
    CHECK (r.at (1, 0) == Rgb {0, 0, 0});
}

TEST_CASE ("label maps reject classes above 15")
{
    LabelMap m (3, 3, 5);
    CHECK (m.at (2, 2) == 5);
    m.set (0, 0, 15);
    CHECK (m.at (0, 0) == 15);
    CHECK (code_of ([&] { m.set (0, 0, 16); }) == ErrorCode::ClassOutOfRange);
    CHECK (code_of ([] { LabelMap (2, 2, 16); }) == ErrorCode::ClassOutOfRange);
    CHECK (code_of ([] { LabelMap (1, 2, std::vector<uint8_t> {0, 200}); }) == ErrorCode::ClassOutOfRange);
}

TEST_CASE ("default palette: 16 distinct colours, reserved classes last")
{
    const Palette p;
    std::set<Rgb> colours;
    for (int c = 0; c < kClassCount; ++c)
        colours.insert (p[c].rgb);
    CHECK (colours.size () == kClassCount);
    CHECK (p[0].name == "sky");
    CHECK (p[7].name == "car");
    CHECK (p[14].name == "reserved-1");
    CHECK (p[15].name == "reserved-2");
    for (int c = 0; c < kClassCount; ++c)
        CHECK (p.find (p[c].rgb) == c);
    CHECK (p.find ({1, 2, 3}) == -1);
}

TEST_CASE ("palette JSON round trip and shipped palette file")
{
    const Palette p;
    const Palette q = Palette::from_json (p.to_json ());
    for (int c = 0; c < kClassCount; ++c) {
        CHECK (q[c].name == p[c].name);
        CHECK (q[c].rgb == p[c].rgb);
    }
    const Palette shipped = Palette::load (std::string (PANOSYNTH_SOURCE_DIR) + "/data/palette.json");
    for (int c = 0; c < kClassCount; ++c) {
        CHECK (shipped[c].name == p[c].name);
        CHECK (shipped[c].rgb == p[c].rgb);
    }
}

TEST_CASE ("palette JSON validation")
{
    CHECK (code_of ([] { Palette::from_json ("{"); }) == ErrorCode::Config);
    CHECK (code_of ([] { Palette::from_json ("[]"); }) == ErrorCode::Config);

    auto doc = nlohmann::json::parse (Palette ().to_json ());
    auto extra = doc;
    extra[3]["alpha"] = 1;
    CHECK (code_of ([&] { Palette::from_json (extra.dump ()); }) == ErrorCode::Config);

    auto dup_colour = doc;
    dup_colour[1]["rgb"] = dup_colour[0]["rgb"];
    CHECK (code_of ([&] { Palette::from_json (dup_colour.dump ()); }) == ErrorCode::Config);

    auto dup_index = doc;
    dup_index[1]["index"] = 0;
    CHECK (code_of ([&] { Palette::from_json (dup_index.dump ()); }) == ErrorCode::Config);

    auto bad_rgb = doc;
    bad_rgb[2]["rgb"] = {1, 2, 300};
    CHECK (code_of ([&] { Palette::from_json (bad_rgb.dump ()); }) == ErrorCode::Config);

    CHECK (code_of ([] { Palette::load ("/nonexistent/palette.json"); }) == ErrorCode::Io);
}

TEST_CASE ("bilinear sampling matches the textbook formula")
{
    std::mt19937_64 rng (11);
    const Raster img = test::random_raster (rng, 9, 7);
    std::uniform_real_distribution<double> ux (0.0, 8.0), uy (0.0, 6.0);
    for (int i = 0; i < 500; ++i) {
        const double x = ux (rng);
        const double y = uy (rng);
        const int x0 = static_cast<int> (std::floor (x));
        const int y0 = static_cast<int> (std::floor (y));
        const int x1 = std::min (x0 + 1, 8);
        const int y1 = std::min (y0 + 1, 6);
        const double ax = x - x0;
        const double ay = y - y0;
        const Sample s = sample_bilinear (img, x, y);
        REQUIRE (s.valid);
        for (int c = 0; c < 3; ++c) {
            const double expect = (img.at (x0, y0)[c] * (1 - ax) + img.at (x1, y0)[c] * ax) * (1 - ay) +
                                  (img.at (x0, y1)[c] * (1 - ax) + img.at (x1, y1)[c] * ax) * ay;
            CHECK (s.rgb[c] == doctest::Approx (expect).epsilon (1e-12));
        }
    }
}

TEST_CASE ("bilinear sampling: exact hits, out of bounds and invalid neighbours")
{
    Raster img (3, 3, Rgb {50, 60, 70});
    img.set (1, 1, {0, 0, 0});
    const Sample centre = sample_bilinear (img, 1.0, 1.0);
    CHECK (centre.valid);
    CHECK (centre.rgb[0] == 0.0);

    // The right edge pixel is usable on its own; anything past it is not.
    CHECK (sample_bilinear (img, 2.0, 2.0).valid);
    CHECK_FALSE (sample_bilinear (img, 2.5, 1.0).valid);
    CHECK_FALSE (sample_bilinear (img, -0.25, 1.0).valid);

    img.set_invalid (2, 2);
    CHECK_FALSE (sample_bilinear (img, 1.5, 1.5).valid);
    CHECK (sample_bilinear (img, 1.0, 1.5).valid);
}

TEST_CASE ("footprint clamping covers half a pixel beyond the edge centres")
{
    const LabelMap m (4, 2);
    CHECK_FALSE (clamp_to_footprint (m, -0.5, 0.0).has_value ());
    CHECK_FALSE (clamp_to_footprint (m, 3.5, 0.0).has_value ());
    const auto p = clamp_to_footprint (m, -0.49, 1.49);
    REQUIRE (p.has_value ());
    CHECK (p->first == 0.0);
    CHECK (p->second == 1.0);
    const auto q = clamp_to_footprint (m, 2.25, 0.5);
    REQUIRE (q.has_value ());
    CHECK (q->first == 2.25);
}

TEST_CASE ("resize: identity, constant images and label classes")
{
    std::mt19937_64 rng (5);
    const Raster img = test::random_raster (rng, 13, 9);
    CHECK (resize (img, 13, 9) == img);

    const Raster flat (10, 6, Rgb {77, 88, 99});
    const Raster up = resize (flat, 37, 21);
    CHECK (up.width () == 37);
    CHECK (up.height () == 21);
    for (int y = 0; y < 21; ++y)
        for (int x = 0; x < 37; ++x)
            CHECK (up.at (x, y) == Rgb {77, 88, 99});

    // Labels take source classes only.
    const LabelMap labels = test::random_labels (rng, 16, 8, 4);
    const LabelMap big = resize (labels, 50, 30);
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 50; ++x)
            CHECK (big.at (x, y) < 4);

    // Exact 2x upscale of labels repeats each class in a 2x2 block.
    const LabelMap twice = resize (labels, 32, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 32; ++x)
            CHECK (twice.at (x, y) == labels.at (x / 2, y / 2));

    CHECK (code_of ([&] { resize (img, 0, 4); }) == ErrorCode::InvalidArgument);
}

TEST_CASE ("resize propagates invalid regions to both rasters and labels")
{
    Raster img (8, 8, Rgb {1, 1, 1});
    LabelMap lab (8, 8, 3);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 4; ++x) {
            img.set_invalid (x, y);
            lab.set_invalid (x, y);
        }
    const Raster r = resize (img, 16, 16);
    const LabelMap l = resize (lab, 16, 16);
    CHECK (r.valid_mask ().size () == l.valid_mask ().size ());
    for (std::size_t i = 0; i < r.valid_mask ().size (); ++i)
        CHECK (r.valid_mask ()[i] == l.valid_mask ()[i]);
    CHECK_FALSE (r.is_valid (0, 0));
    CHECK (r.is_valid (15, 15));
}

TEST_CASE ("render_labels paints palette colours and keeps the mask")
{
    LabelMap m (2, 1, std::vector<uint8_t> {7, 2}, std::vector<uint8_t> {1, 0});
    const Raster r = render_labels (m, Palette ());
    CHECK (r.at (0, 0) == Palette ()[7].rgb);
    CHECK_FALSE (r.is_valid (1, 0));
}

TEST_CASE ("PNG round trip of random rasters (property)")
{
    TempDir dir;
    std::mt19937_64 rng (42);
    std::uniform_int_distribution<int> dim (1, 40);
    for (int i = 0; i < 25; ++i) {
        const Raster img = test::random_raster (rng, dim (rng), dim (rng));
        const std::string path = dir.str ("rt_" + std::to_string (i) + ".png");
        save_image (img, path);
        CHECK (load_image (path) == img);
    }
}

TEST_CASE ("PNG round trip of label maps keeps invalid pixels")
{
    TempDir dir;
    std::mt19937_64 rng (7);
    LabelMap m = test::random_labels (rng, 23, 17);
    m.set_invalid (0, 0);
    m.set_invalid (22, 16);
    const std::string path = dir.str ("nested/deeper/labels.png");
    save_labels (m, path);
    const LabelMap back = load_labels (path, Palette ());
    CHECK (back == m);
    CHECK_FALSE (back.is_valid (22, 16));
}

TEST_CASE ("RGB label files are inverted through the palette")
{
    TempDir dir;
    const Palette p;
    std::vector<uint8_t> rgb;
    for (int c : {0, 7, 13, 15})
        rgb.insert (rgb.end (), p[c].rgb.begin (), p[c].rgb.end ());
    write_rgb_png (dir.str ("rgb_labels.png"), 4, 1, rgb);
    const LabelMap m = load_labels (dir.str ("rgb_labels.png"), p);
    CHECK (m.at (0, 0) == 0);
    CHECK (m.at (1, 0) == 7);
    CHECK (m.at (2, 0) == 13);
    CHECK (m.at (3, 0) == 15);

    rgb[0] = 1;
    write_rgb_png (dir.str ("bad_colour.png"), 4, 1, rgb);
    CHECK (code_of ([&] { load_labels (dir.str ("bad_colour.png"), p); }) == ErrorCode::PaletteMismatch);
}

TEST_CASE ("gray label files: 255 is invalid, other values above 15 are rejected")
{
    TempDir dir;
    write_gray_png (dir.str ("ok.png"), 3, 1, {4, 255, 15});
    const LabelMap m = load_labels (dir.str ("ok.png"), Palette ());
    CHECK (m.at (0, 0) == 4);
    CHECK_FALSE (m.is_valid (1, 0));
    CHECK (m.at (2, 0) == 15);

    write_gray_png (dir.str ("bad.png"), 3, 1, {4, 16, 0});
    CHECK (code_of ([&] { load_labels (dir.str ("bad.png"), Palette ()); }) == ErrorCode::ClassOutOfRange);
}

TEST_CASE ("gray images load as RGB")
{
    TempDir dir;
    write_gray_png (dir.str ("g.png"), 2, 1, {10, 200});
    const Raster r = load_image (dir.str ("g.png"));
    CHECK (r.at (0, 0) == Rgb {10, 10, 10});
    CHECK (r.at (1, 0) == Rgb {200, 200, 200});
}

TEST_CASE ("PNG error reporting")
{
    TempDir dir;
    CHECK (code_of ([&] { load_image (dir.str ("missing.png")); }) == ErrorCode::Io);

    {
        std::ofstream f (dir.str ("text.png"));
        f << "this is not a png file at all";
    }
    CHECK (code_of ([&] { load_image (dir.str ("text.png")); }) == ErrorCode::UnsupportedFormat);

    std::mt19937_64 rng (3);
    save_image (test::random_raster (rng, 64, 64), dir.str ("full.png"));
    std::ifstream in (dir.str ("full.png"), std::ios::binary);
    std::string bytes ((std::istreambuf_iterator<char> (in)), std::istreambuf_iterator<char> ());
    {
        std::ofstream out (dir.str ("truncated.png"), std::ios::binary);
        out.write (bytes.data (), static_cast<std::streamsize> (bytes.size () / 2));
    }
    CHECK (code_of ([&] { load_image (dir.str ("truncated.png")); }) == ErrorCode::CorruptData);

    CHECK (code_of ([&] { save_image (Raster (2, 2), "/proc/panosynth/forbidden.png"); }) == ErrorCode::Io);
}

TEST_CASE ("error code names")
{
    CHECK (std::string (error_code_name (ErrorCode::CoverageGap)) == "coverage gap");
    CHECK (std::string (error_code_name (ErrorCode::Io)) == "i/o error");
}
