/*
 * png_io.cpp - lossless file I/O for rasters and label maps
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

#include "core/png_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

#include <png.h>

namespace panosynth {

namespace {

enum class Layout { Rgb, Index };

struct ReadState {
    const uint8_t *bytes;
    std::size_t size;
    std::size_t pos;
    char message[256];
};

struct DecodedPng {
    uint32_t width = 0;
    uint32_t height = 0;
    int channels = 0;       // 1 or 3 after transforms
    bool rgb_source = false; // source color type carried color
    std::vector<uint8_t> pixels;
};

void on_png_error (png_structp png, png_const_charp msg)
{
    auto *state = static_cast<ReadState *> (png_get_error_ptr (png));
    std::snprintf (state->message, sizeof (state->message), "%s", msg);
    png_longjmp (png, 1);
}

void on_png_warning (png_structp, png_const_charp) {}

void read_from_memory (png_structp png, png_bytep out, png_size_t count)
{
    auto *state = static_cast<ReadState *> (png_get_io_ptr (png));
    if (state->size - state->pos < count)
        png_error (png, "unexpected end of file");
    std::memcpy (out, state->bytes + state->pos, count);
    state->pos += count;
}

/*
 * Everything between setjmp and a possible longjmp lives in plain C objects;
 * the decoded buffer is owned by the caller and only resized before setjmp.
 * Returns false with state->message set on failure.
 */
bool decode_png (ReadState *state, Layout layout, DecodedPng *out)
{
    png_structp png = png_create_read_struct (PNG_LIBPNG_VER_STRING, state, on_png_error, on_png_warning);
    if (!png) {
        std::snprintf (state->message, sizeof (state->message), "out of memory");
        return false;
    }
    png_infop info = png_create_info_struct (png);
    if (!info) {
        png_destroy_read_struct (&png, nullptr, nullptr);
        std::snprintf (state->message, sizeof (state->message), "out of memory");
        return false;
    }
    png_bytep *volatile rows = nullptr;
    if (setjmp (png_jmpbuf (png))) {
        std::free (rows);
        png_destroy_read_struct (&png, &info, nullptr);
        return false;
    }

    png_set_read_fn (png, state, read_from_memory);
    png_read_info (png, info);

    const png_uint_32 width = png_get_image_width (png, info);
    const png_uint_32 height = png_get_image_height (png, info);
    const int color_type = png_get_color_type (png, info);
    const int bit_depth = png_get_bit_depth (png, info);

    out->rgb_source = (color_type & PNG_COLOR_MASK_COLOR) && color_type != PNG_COLOR_TYPE_PALETTE;
    if (layout == Layout::Rgb) {
        if (color_type == PNG_COLOR_TYPE_PALETTE)
            png_set_palette_to_rgb (png);
        if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
            png_set_expand_gray_1_2_4_to_8 (png);
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
            png_set_gray_to_rgb (png);
        out->channels = 3;
    } else {
        if (out->rgb_source) {
            out->channels = 3;
        } else {
            // Raw indices: unpack sub-byte depths without rescaling.
            png_set_packing (png);
            out->channels = 1;
        }
    }
    if (bit_depth == 16)
        png_set_strip_16 (png);
    png_set_strip_alpha (png);
    png_read_update_info (png, info);

    const png_size_t rowbytes = png_get_rowbytes (png, info);
    if (rowbytes != static_cast<png_size_t> (width) * out->channels)
        png_error (png, "unexpected row layout after transforms");

    out->width = width;
    out->height = height;
    if (out->pixels.size () != static_cast<std::size_t> (rowbytes) * height)
        png_error (png, "decode buffer size mismatch");

    rows = static_cast<png_bytepp> (std::malloc (sizeof (png_bytep) * height));
    if (!rows)
        png_error (png, "out of memory");
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = out->pixels.data () + static_cast<std::size_t> (y) * rowbytes;
    png_read_image (png, rows);
    png_read_end (png, nullptr);

    std::free (rows);
    png_destroy_read_struct (&png, &info, nullptr);
    return true;
}

// Reads IHDR only so the caller can size the decode buffer before setjmp.
bool peek_header (ReadState *state, Layout layout, uint32_t *w, uint32_t *h, int *channels)
{
    png_structp png = png_create_read_struct (PNG_LIBPNG_VER_STRING, state, on_png_error, on_png_warning);
    if (!png)
        return false;
    png_infop info = png_create_info_struct (png);
    if (!info) {
        png_destroy_read_struct (&png, nullptr, nullptr);
        return false;
    }
    if (setjmp (png_jmpbuf (png))) {
        png_destroy_read_struct (&png, &info, nullptr);
        return false;
    }
    png_set_read_fn (png, state, read_from_memory);
    png_read_info (png, info);
    *w = png_get_image_width (png, info);
    *h = png_get_image_height (png, info);
    const int color_type = png_get_color_type (png, info);
    const bool rgb_source = (color_type & PNG_COLOR_MASK_COLOR) && color_type != PNG_COLOR_TYPE_PALETTE;
    *channels = (layout == Layout::Rgb || rgb_source) ? 3 : 1;
    png_destroy_read_struct (&png, &info, nullptr);
    return true;
}

std::vector<uint8_t> read_file (const std::string &path)
{
    std::error_code ec;
    if (!std::filesystem::is_regular_file (path, ec))
        throw Error (ErrorCode::Io, "no such file: '" + path + "'");
    std::ifstream in (path, std::ios::binary);
    if (!in)
        throw Error (ErrorCode::Io, "cannot open '" + path + "'");
    return std::vector<uint8_t> (std::istreambuf_iterator<char> (in), std::istreambuf_iterator<char> ());
}

DecodedPng decode_file (const std::string &path, Layout layout)
{
    const std::vector<uint8_t> bytes = read_file (path);
    if (bytes.size () < 8 || png_sig_cmp (bytes.data (), 0, 8) != 0)
        throw Error (ErrorCode::UnsupportedFormat, "'" + path + "' is not a PNG file");

    ReadState state {bytes.data (), bytes.size (), 0, {0}};
    uint32_t w = 0, h = 0;
    int channels = 0;
    if (!peek_header (&state, layout, &w, &h, &channels))
        throw Error (ErrorCode::CorruptData, "'" + path + "': " + state.message);
    // Hard cap keeps a corrupt header from requesting absurd allocations.
    if (w == 0 || h == 0 || static_cast<uint64_t> (w) * h > (1ull << 30))
        throw Error (ErrorCode::CorruptData, "'" + path + "': implausible dimensions");

    DecodedPng out;
    out.pixels.resize (static_cast<std::size_t> (w) * h * channels);
    state.pos = 0;
    if (!decode_png (&state, layout, &out))
        throw Error (ErrorCode::CorruptData, "'" + path + "': " + state.message);
    return out;
}

struct WriteState {
    std::vector<uint8_t> *sink;
    char message[256];
};

void on_png_write_error (png_structp png, png_const_charp msg)
{
    auto *state = static_cast<WriteState *> (png_get_error_ptr (png));
    std::snprintf (state->message, sizeof (state->message), "%s", msg);
    png_longjmp (png, 1);
}

void write_to_memory (png_structp png, png_bytep data, png_size_t count)
{
    auto *state = static_cast<WriteState *> (png_get_io_ptr (png));
    state->sink->insert (state->sink->end (), data, data + count);
}

void flush_noop (png_structp) {}

// The sink is reserved by the caller; rows point into caller-owned data.
bool encode_png (WriteState *state, const uint8_t *pixels, uint32_t width, uint32_t height, int channels)
{
    png_structp png = png_create_write_struct (PNG_LIBPNG_VER_STRING, state, on_png_write_error, on_png_warning);
    if (!png)
        return false;
    png_infop info = png_create_info_struct (png);
    if (!info) {
        png_destroy_write_struct (&png, nullptr);
        return false;
    }
    png_bytep *volatile rows = nullptr;
    if (setjmp (png_jmpbuf (png))) {
        std::free (rows);
        png_destroy_write_struct (&png, &info);
        return false;
    }
    png_set_write_fn (png, state, write_to_memory, flush_noop);
    png_set_IHDR (png, info, width, height, 8,
                  channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                  PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level (png, 6);
    png_write_info (png, info);

    rows = static_cast<png_bytepp> (std::malloc (sizeof (png_bytep) * height));
    if (!rows)
        png_error (png, "out of memory");
    const std::size_t stride = static_cast<std::size_t> (width) * channels;
    for (uint32_t y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep> (pixels + y * stride);
    png_write_image (png, rows);
    png_write_end (png, nullptr);

    std::free (rows);
    png_destroy_write_struct (&png, &info);
    return true;
}

void write_png (const std::string &path, const uint8_t *pixels, int width, int height, int channels)
{
    std::vector<uint8_t> encoded;
    encoded.reserve (static_cast<std::size_t> (width) * height * channels / 2 + 1024);
    WriteState state {&encoded, {0}};
    if (!encode_png (&state, pixels, static_cast<uint32_t> (width), static_cast<uint32_t> (height), channels))
        throw Error (ErrorCode::Io, "cannot encode '" + path + "': " + state.message);

    const std::filesystem::path p (path);
    std::error_code ec;
    if (p.has_parent_path ())
        std::filesystem::create_directories (p.parent_path (), ec);
    std::ofstream out (path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error (ErrorCode::Io, "cannot write '" + path + "'");
    out.write (reinterpret_cast<const char *> (encoded.data ()), static_cast<std::streamsize> (encoded.size ()));
    if (!out)
        throw Error (ErrorCode::Io, "short write to '" + path + "'");
}

}

Raster
load_image (const std::string &path)
{
    DecodedPng png = decode_file (path, Layout::Rgb);
    return Raster (static_cast<int> (png.width), static_cast<int> (png.height), std::move (png.pixels));
}

LabelMap
load_labels (const std::string &path, const Palette &palette)
{
    DecodedPng png = decode_file (path, Layout::Index);
    const int w = static_cast<int> (png.width);
    const int h = static_cast<int> (png.height);
    const std::size_t n = static_cast<std::size_t> (w) * h;

    std::vector<uint8_t> classes (n, 0);
    std::vector<uint8_t> valid (n, 1);
    if (png.channels == 3) {
        for (std::size_t i = 0; i < n; ++i) {
            const Rgb rgb {png.pixels[i * 3], png.pixels[i * 3 + 1], png.pixels[i * 3 + 2]};
            const int cls = palette.find (rgb);
            if (cls < 0)
                throw Error (ErrorCode::PaletteMismatch,
                             "'" + path + "': color (" + std::to_string (rgb[0]) + "," +
                             std::to_string (rgb[1]) + "," + std::to_string (rgb[2]) +
                             ") at pixel " + std::to_string (i % w) + "," + std::to_string (i / w) +
                             " is not in the palette");
            classes[i] = static_cast<uint8_t> (cls);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const uint8_t v = png.pixels[i];
            if (v == kInvalidLabelValue) {
                valid[i] = 0;
            } else if (v >= kClassCount) {
                throw Error (ErrorCode::ClassOutOfRange,
                             "'" + path + "': class index " + std::to_string (v) + " at pixel " +
                             std::to_string (i % w) + "," + std::to_string (i / w) + " is >= 16");
            } else {
                classes[i] = v;
            }
        }
    }
    return LabelMap (w, h, std::move (classes), std::move (valid));
}

void
save_image (const Raster &img, const std::string &path)
{
    write_png (path, img.data ().data (), img.width (), img.height (), 3);
}

void
save_labels (const LabelMap &labels, const std::string &path)
{
    std::vector<uint8_t> out (labels.data ().begin (), labels.data ().end ());
    const auto mask = labels.valid_mask ();
    for (std::size_t i = 0; i < out.size (); ++i)
        if (!mask[i])
            out[i] = kInvalidLabelValue;
    write_png (path, out.data (), labels.width (), labels.height (), 1);
}

}
