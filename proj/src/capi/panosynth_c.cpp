/*
 * panosynth_c.cpp - extern "C" wrappers around the panosynth core
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

#include "panosynth/panosynth.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>
#include <vector>

#include "core/cylproj.hpp"
#include "core/datasetgen.hpp"
#include "core/image.hpp"
#include "core/png_io.hpp"
#include "core/regmatch.hpp"
#include "core/segmetrics.hpp"
#include "core/stitcher.hpp"

using namespace panosynth;

struct ps_raster {
    Raster img;
};
struct ps_labels {
    LabelMap map;
};
struct ps_palette {
    Palette palette;
};
struct ps_match_curve {
    MatchCurve curve;
};
struct ps_panorama {
    Panorama pano;
};
struct ps_confusion {
    ConfusionMatrix cm;
};
struct ps_class_counter {
    ClassCounter counter;
};

namespace {

thread_local std::string g_last_error;

ps_status fail (ps_status s, const std::string &msg)
{
    g_last_error = msg;
    return s;
}

template <typename Fn>
ps_status guarded (Fn &&fn) noexcept
{
    try {
        g_last_error.clear ();
        fn ();
        return PS_OK;
    } catch (const Error &e) {
        return fail (static_cast<ps_status> (e.code ()), e.what ());
    } catch (const std::bad_alloc &) {
        return fail (PS_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail (PS_INTERNAL, e.what ());
    } catch (...) {
        return fail (PS_INTERNAL, "unknown exception");
    }
}

void require (bool cond, const char *what)
{
    if (!cond)
        throw Error (ErrorCode::InvalidArgument, what);
}

char *dup_string (const std::string &s)
{
    char *out = static_cast<char *> (std::malloc (s.size () + 1));
    if (!out)
        throw std::bad_alloc ();
    std::memcpy (out, s.c_str (), s.size () + 1);
    return out;
}

CylindricalCamera make_camera (double focal, double radius, int width, int height)
{
    return radius > 0.0 ? CylindricalCamera (focal, radius, width, height)
                        : CylindricalCamera (focal, width, height);
}

const Palette &palette_or_default (const ps_palette *p)
{
    static const Palette builtin;
    return p ? p->palette : builtin;
}

std::vector<uint8_t> copy_valid (const uint8_t *valid, std::size_t n)
{
    std::vector<uint8_t> v;
    if (valid) {
        v.resize (n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = valid[i] ? 1 : 0;
    }
    return v;
}

template <int C>
void read_grid (const PixelGrid<C> &g, uint8_t *data, uint8_t *valid)
{
    if (data)
        std::memcpy (data, g.data ().data (), g.data ().size ());
    if (valid)
        std::memcpy (valid, g.valid_mask ().data (), g.valid_mask ().size ());
}

Direction direction_from (int v)
{
    if (v < PS_LEFT || v > PS_BACK)
        throw Error (ErrorCode::InvalidArgument, "direction index out of range: " + std::to_string (v));
    return static_cast<Direction> (v);
}

ClassSet mask_to_set (uint32_t mask)
{
    ClassSet s;
    for (int c = 0; c < kClassCount; ++c)
        if (mask & (1u << c))
            s.set (c);
    return s;
}

void write_optional (const std::array<std::optional<double>, kClassCount> &src, double *values, int *defined)
{
    for (int c = 0; c < kClassCount; ++c) {
        if (values)
            values[c] = src[c].value_or (0.0);
        if (defined)
            defined[c] = src[c].has_value () ? 1 : 0;
    }
}

}

extern "C" {

const char *
ps_version (void)
{
    return "1.0.0";
}

const char *
ps_status_name (ps_status status)
{
    switch (status) {
    case PS_OK:
        return "ok";
    case PS_INTERNAL:
        return "internal error";
    default:
        if (status >= PS_INVALID_ARGUMENT && status <= PS_CONFIG)
            return error_code_name (static_cast<ErrorCode> (status));
        return "unknown status";
    }
}

const char *
ps_last_error (void)
{
    return g_last_error.c_str ();
}

void
ps_string_free (char *s)
{
    std::free (s);
}

ps_status
ps_palette_default (ps_palette **out)
{
    return guarded ([&] {
        require (out, "out is NULL");
        *out = new ps_palette {Palette ()};
    });
}

ps_status
ps_palette_load (const char *path, ps_palette **out)
{
    return guarded ([&] {
        require (path && out, "path or out is NULL");
        *out = new ps_palette {Palette::load (path)};
    });
}

ps_status
ps_palette_rgb (const ps_palette *palette, int cls, uint8_t rgb[3])
{
    return guarded ([&] {
        require (rgb, "rgb is NULL");
        if (cls < 0 || cls >= kClassCount)
            throw Error (ErrorCode::ClassOutOfRange, "class " + std::to_string (cls) + " is outside 0..15");
        const Rgb c = palette_or_default (palette)[cls].rgb;
        std::memcpy (rgb, c.data (), 3);
    });
}

void
ps_palette_free (ps_palette *palette)
{
    delete palette;
}

ps_status
ps_raster_create (int width, int height, const uint8_t *rgb, const uint8_t *valid, ps_raster **out)
{
    return guarded ([&] {
        require (rgb && out, "rgb or out is NULL");
        require (width > 0 && height > 0, "raster dimensions must be positive");
        const std::size_t n = static_cast<std::size_t> (width) * height;
        *out = new ps_raster {Raster (width, height, std::vector<uint8_t> (rgb, rgb + n * 3), copy_valid (valid, n))};
    });
}

ps_status
ps_raster_load (const char *path, ps_raster **out)
{
    return guarded ([&] {
        require (path && out, "path or out is NULL");
        *out = new ps_raster {load_image (path)};
    });
}

ps_status
ps_raster_save (const ps_raster *raster, const char *path)
{
    return guarded ([&] {
        require (raster && path, "raster or path is NULL");
        save_image (raster->img, path);
    });
}

int
ps_raster_width (const ps_raster *raster)
{
    return raster ? raster->img.width () : 0;
}

int
ps_raster_height (const ps_raster *raster)
{
    return raster ? raster->img.height () : 0;
}

ps_status
ps_raster_read (const ps_raster *raster, uint8_t *rgb, uint8_t *valid)
{
    return guarded ([&] {
        require (raster, "raster is NULL");
        read_grid (raster->img, rgb, valid);
    });
}

void
ps_raster_free (ps_raster *raster)
{
    delete raster;
}

ps_status
ps_labels_create (int width, int height, const uint8_t *classes, const uint8_t *valid, ps_labels **out)
{
    return guarded ([&] {
        require (classes && out, "classes or out is NULL");
        require (width > 0 && height > 0, "label map dimensions must be positive");
        const std::size_t n = static_cast<std::size_t> (width) * height;
        *out = new ps_labels {LabelMap (width, height, std::vector<uint8_t> (classes, classes + n), copy_valid (valid, n))};
    });
}

ps_status
ps_labels_load (const char *path, const ps_palette *palette, ps_labels **out)
{
    return guarded ([&] {
        require (path && out, "path or out is NULL");
        *out = new ps_labels {load_labels (path, palette_or_default (palette))};
    });
}

ps_status
ps_labels_save (const ps_labels *labels, const char *path)
{
    return guarded ([&] {
        require (labels && path, "labels or path is NULL");
        save_labels (labels->map, path);
    });
}

int
ps_labels_width (const ps_labels *labels)
{
    return labels ? labels->map.width () : 0;
}

int
ps_labels_height (const ps_labels *labels)
{
    return labels ? labels->map.height () : 0;
}

ps_status
ps_labels_read (const ps_labels *labels, uint8_t *classes, uint8_t *valid)
{
    return guarded ([&] {
        require (labels, "labels is NULL");
        read_grid (labels->map, classes, valid);
    });
}

void
ps_labels_free (ps_labels *labels)
{
    delete labels;
}

ps_status
ps_project_forward (double focal, double radius, double x, double y, double *out_x, double *out_y)
{
    return guarded ([&] {
        require (out_x && out_y, "output pointer is NULL");
        const ImagePoint q = project_forward ({x, y}, make_camera (focal, radius, 1, 1));
        *out_x = q.x;
        *out_y = q.y;
    });
}

ps_status
ps_project_backward (double focal, double radius, double x, double y, double *out_x, double *out_y)
{
    return guarded ([&] {
        require (out_x && out_y, "output pointer is NULL");
        const ImagePoint p = project_backward ({x, y}, make_camera (focal, radius, 1, 1));
        *out_x = p.x;
        *out_y = p.y;
    });
}

ps_status
ps_valid_band (double focal, double radius, int width, int height, int *first, int *last)
{
    return guarded ([&] {
        require (first && last, "output pointer is NULL");
        const ColumnSpan s = warped_valid_columns (make_camera (focal, radius, width, height));
        *first = s.first;
        *last = s.last;
    });
}

ps_status
ps_warp_raster (const ps_raster *src, double focal, double radius, ps_raster **out)
{
    return guarded ([&] {
        require (src && out, "src or out is NULL");
        const auto cam = make_camera (focal, radius, src->img.width (), src->img.height ());
        *out = new ps_raster {warp_to_cylinder (src->img, cam)};
    });
}

ps_status
ps_warp_labels (const ps_labels *src, double focal, double radius, ps_labels **out)
{
    return guarded ([&] {
        require (src && out, "src or out is NULL");
        const auto cam = make_camera (focal, radius, src->map.width (), src->map.height ());
        *out = new ps_labels {warp_to_cylinder (src->map, cam)};
    });
}

void
ps_match_config_default (ps_match_config *cfg)
{
    if (!cfg)
        return;
    cfg->x_c1 = 0;
    cfg->region_width = 9;
    cfg->row_first = 0;
    cfg->row_last = -1;
    cfg->scan_first = 0;
    cfg->scan_last = -1;
}

ps_status
ps_default_reference_column (double focal, double radius, int width, int height, int region_width,
                             int edge_margin, int *out)
{
    return guarded ([&] {
        require (out, "out is NULL");
        *out = default_reference_column (make_camera (focal, radius, width, height), region_width, edge_margin);
    });
}

ps_status
ps_scan_match (const ps_raster *i1, const ps_raster *i2, const ps_match_config *cfg, ps_match_curve **out)
{
    return guarded ([&] {
        require (i1 && i2 && cfg && out, "NULL argument");
        MatchConfig mc;
        mc.x_c1 = cfg->x_c1;
        mc.region_width = cfg->region_width;
        if (cfg->row_last >= 0)
            mc.region_rows = RowRange {cfg->row_first, cfg->row_last};
        if (cfg->scan_last >= 0)
            mc.scan_range = std::pair<int, int> {cfg->scan_first, cfg->scan_last};
        *out = new ps_match_curve {scan_match (i1->img, i2->img, mc)};
    });
}

int
ps_match_curve_d (const ps_match_curve *curve)
{
    return curve ? curve->curve.d : 0;
}

int
ps_match_curve_best_x (const ps_match_curve *curve)
{
    return curve ? curve->curve.best_x_c2 : 0;
}

uint64_t
ps_match_curve_best_dv (const ps_match_curve *curve)
{
    return curve ? curve->curve.best_dv : 0;
}

size_t
ps_match_curve_size (const ps_match_curve *curve)
{
    return curve ? curve->curve.candidates.size () : 0;
}

ps_status
ps_match_curve_at (const ps_match_curve *curve, size_t i, int *x_c2, uint64_t *dv)
{
    return guarded ([&] {
        require (curve && x_c2 && dv, "NULL argument");
        require (i < curve->curve.candidates.size (), "candidate index out of range");
        *x_c2 = curve->curve.candidates[i].x_c2;
        *dv = curve->curve.candidates[i].dv;
    });
}

ps_status
ps_match_curve_csv (const ps_match_curve *curve, char **out)
{
    return guarded ([&] {
        require (curve && out, "curve or out is NULL");
        *out = dup_string (curve->curve.to_csv ());
    });
}

void
ps_match_curve_free (ps_match_curve *curve)
{
    delete curve;
}

void
ps_rig_default (ps_rig *rig)
{
    if (!rig)
        return;
    rig->d = 836;
    rig->order[0] = PS_LEFT;
    rig->order[1] = PS_FORWARD;
    rig->order[2] = PS_RIGHT;
    rig->order[3] = PS_BACK;
    rig->focal = kSynthiaFocalLength;
    rig->radius = 0.0;
    rig->width = 1280;
    rig->height = 760;
}

ps_status
ps_stitch (const ps_raster *const images[PS_RIG_VIEWS], const ps_labels *const labels[PS_RIG_VIEWS],
           const ps_rig *rig, const char *const source_ids[PS_RIG_VIEWS], ps_panorama **out)
{
    return guarded ([&] {
        require (images && rig && out, "NULL argument");
        RigCalibration calib {rig->d, {}, make_camera (rig->focal, rig->radius, rig->width, rig->height)};
        for (int k = 0; k < kRigViews; ++k)
            calib.order[k] = direction_from (rig->order[k]);

        std::array<Raster, kRigViews> imgs;
        std::optional<std::array<LabelMap, kRigViews>> maps;
        if (labels)
            maps.emplace ();
        std::array<std::string, kRigViews> ids;
        for (int i = 0; i < kRigViews; ++i) {
            require (images[i], "image is NULL");
            imgs[i] = images[i]->img;
            if (labels) {
                require (labels[i], "label map is NULL");
                (*maps)[i] = labels[i]->map;
            }
            if (source_ids && source_ids[i])
                ids[i] = source_ids[i];
        }
        *out = new ps_panorama {stitch_panorama (imgs, maps, calib, ids)};
    });
}

ps_status
ps_estimate_rig_distance (const ps_raster *const images[PS_RIG_VIEWS], const ps_rig *rig, int x_c1,
                          int region_width, int edge_margin, int *d, int *spread, int pair_d[PS_RIG_VIEWS])
{
    return guarded ([&] {
        require (images && rig && d && spread, "NULL argument");
        const CylindricalCamera cam = make_camera (rig->focal, rig->radius, rig->width, rig->height);
        std::array<Raster, kRigViews> warped;
        for (int i = 0; i < kRigViews; ++i) {
            require (images[i], "image is NULL");
            warped[i] = warp_to_cylinder (images[i]->img, cam);
        }
        MatchConfig cfg;
        cfg.region_width = region_width;
        cfg.x_c1 = x_c1 >= 0 ? x_c1 : default_reference_column (cam, region_width, edge_margin);
        std::vector<std::pair<Raster, Raster>> pairs;
        for (int k = 0; k < kRigViews; ++k) {
            const int a = static_cast<int> (direction_from (rig->order[k]));
            const int b = static_cast<int> (direction_from (rig->order[(k + 1) % kRigViews]));
            pairs.emplace_back (warped[a], warped[b]);
        }
        const RigDistance r = estimate_rig_distance (pairs, cfg);
        *d = r.d;
        *spread = r.spread;
        if (pair_d)
            for (int k = 0; k < kRigViews; ++k)
                pair_d[k] = r.curves[k].d;
    });
}

int
ps_panorama_width (const ps_panorama *pano)
{
    return pano ? pano->pano.rgb.width () : 0;
}

int
ps_panorama_height (const ps_panorama *pano)
{
    return pano ? pano->pano.rgb.height () : 0;
}

ps_status
ps_panorama_rgb (const ps_panorama *pano, ps_raster **out)
{
    return guarded ([&] {
        require (pano && out, "pano or out is NULL");
        *out = new ps_raster {pano->pano.rgb};
    });
}

ps_status
ps_panorama_labels (const ps_panorama *pano, ps_labels **out)
{
    return guarded ([&] {
        require (pano && out, "pano or out is NULL");
        if (!pano->pano.labels)
            throw Error (ErrorCode::EmptyInput, "panorama has no label map");
        *out = new ps_labels {*pano->pano.labels};
    });
}

ps_status
ps_panorama_sidecar (const ps_panorama *pano, char **out)
{
    return guarded ([&] {
        require (pano && out, "pano or out is NULL");
        *out = dup_string (pano->pano.sidecar_json ());
    });
}

ps_status
ps_panorama_rotate (const ps_panorama *pano, int start_column, ps_panorama **out)
{
    return guarded ([&] {
        require (pano && out, "pano or out is NULL");
        *out = new ps_panorama {rotate_start (pano->pano, start_column)};
    });
}

ps_status
ps_panorama_resize (const ps_panorama *pano, int width, int height, ps_panorama **out)
{
    return guarded ([&] {
        require (pano && out, "pano or out is NULL");
        *out = new ps_panorama {resize_panorama (pano->pano, width, height)};
    });
}

ps_status
ps_panorama_split (const ps_panorama *pano, int fov, ps_raster **rgb_out, ps_labels **labels_out,
                   size_t capacity, size_t *count)
{
    return guarded ([&] {
        require (pano && rgb_out && count, "NULL argument");
        std::vector<Crop> crops = split_by_fov (pano->pano, fov);
        require (crops.size () <= capacity, "output arrays too small for the split");
        for (std::size_t k = 0; k < crops.size (); ++k) {
            rgb_out[k] = new ps_raster {std::move (crops[k].rgb)};
            if (labels_out && crops[k].labels)
                labels_out[k] = new ps_labels {std::move (*crops[k].labels)};
        }
        *count = crops.size ();
    });
}

ps_status
ps_panorama_save (const ps_panorama *pano, const char *rgb_path, const char *labels_path, const char *sidecar_path)
{
    return guarded ([&] {
        require (pano && rgb_path, "pano or rgb_path is NULL");
        save_image (pano->pano.rgb, rgb_path);
        if (labels_path) {
            if (!pano->pano.labels)
                throw Error (ErrorCode::EmptyInput, "panorama has no label map");
            save_labels (*pano->pano.labels, labels_path);
        }
        if (sidecar_path) {
            const std::filesystem::path parent = std::filesystem::path (sidecar_path).parent_path ();
            if (!parent.empty ())
                std::filesystem::create_directories (parent);
            std::FILE *f = std::fopen (sidecar_path, "wb");
            if (!f)
                throw Error (ErrorCode::Io, std::string ("cannot write '") + sidecar_path + "'");
            const std::string s = pano->pano.sidecar_json ();
            const bool ok = std::fwrite (s.data (), 1, s.size (), f) == s.size ();
            if (std::fclose (f) != 0 || !ok)
                throw Error (ErrorCode::Io, std::string ("short write to '") + sidecar_path + "'");
        }
    });
}

void
ps_panorama_free (ps_panorama *pano)
{
    delete pano;
}

void
ps_dataset_options_default (ps_dataset_options *opts)
{
    static const int splits[] = {90, 180, 360};
    static const double focals[] = {700.0, 600.0, 500.0, 400.0};
    if (!opts)
        return;
    opts->focal = kSynthiaFocalLength;
    opts->radius = 0.0;
    opts->d = 0;
    opts->order[0] = PS_LEFT;
    opts->order[1] = PS_FORWARD;
    opts->order[2] = PS_RIGHT;
    opts->order[3] = PS_BACK;
    opts->x_c1 = -1;
    opts->region_width = 9;
    opts->edge_margin = 27;
    opts->spread_threshold = 4;
    opts->resize_width = 3328;
    opts->resize_height = 768;
    opts->splits = splits;
    opts->split_count = 3;
    opts->distortion_focals = focals;
    opts->distortion_count = 4;
    opts->dedup_threshold = 1.0;
    opts->seed = 0;
    opts->jobs = 1;
    opts->palette_path = nullptr;
}

ps_status
ps_dataset_build (const char *input_root, const char *const *sequences, size_t sequence_count,
                  const ps_dataset_options *opts, const char *out_root, char **manifest_json)
{
    return guarded ([&] {
        require (input_root && opts && out_root, "NULL argument");
        require (sequence_count == 0 || sequences, "sequences is NULL");
        require (opts->split_count == 0 || opts->splits, "splits is NULL");
        require (opts->distortion_count == 0 || opts->distortion_focals, "distortion_focals is NULL");
        DatasetOptions o;
        o.focal = opts->focal;
        if (opts->radius > 0.0)
            o.radius = opts->radius;
        if (opts->d > 0)
            o.d = opts->d;
        for (int k = 0; k < kRigViews; ++k)
            o.order[k] = direction_from (opts->order[k]);
        if (opts->x_c1 >= 0)
            o.match.x_c1 = opts->x_c1;
        o.match.region_width = opts->region_width;
        o.match.edge_margin = opts->edge_margin;
        o.match.spread_threshold = opts->spread_threshold;
        o.resize_to = {opts->resize_width, opts->resize_height};
        o.splits.assign (opts->splits, opts->splits + opts->split_count);
        o.distortion.focal_lengths.assign (opts->distortion_focals, opts->distortion_focals + opts->distortion_count);
        o.dedup_threshold = opts->dedup_threshold;
        o.seed = opts->seed;
        o.jobs = opts->jobs;
        if (opts->palette_path)
            o.palette = Palette::load (opts->palette_path);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < sequence_count; ++i) {
            require (sequences[i], "sequence name is NULL");
            names.emplace_back (sequences[i]);
        }
        DatasetResult r = build_dataset (input_root, names, o, out_root);
        if (manifest_json)
            *manifest_json = dup_string (r.manifest_json);
    });
}

ps_status
ps_distort_directory (const char *in_dir, const double *focals, size_t focal_count, const ps_palette *palette,
                      const char *out_dir, size_t *files_written)
{
    return guarded ([&] {
        require (in_dir && out_dir, "in_dir or out_dir is NULL");
        DistortionSpec spec;
        if (focals)
            spec.focal_lengths.assign (focals, focals + focal_count);
        const auto files = distort_directory (in_dir, spec, palette_or_default (palette), out_dir);
        if (files_written)
            *files_written = files.size ();
    });
}

ps_status
ps_confusion_create (ps_confusion **out)
{
    return guarded ([&] {
        require (out, "out is NULL");
        *out = new ps_confusion {};
    });
}

ps_status
ps_confusion_accumulate (ps_confusion *cm, const ps_labels *gt, const ps_labels *pred, uint32_t ignore_mask)
{
    return guarded ([&] {
        require (cm && gt && pred, "NULL argument");
        accumulate (cm->cm, gt->map, pred->map, mask_to_set (ignore_mask));
    });
}

ps_status
ps_confusion_merge (ps_confusion *cm, const ps_confusion *other)
{
    return guarded ([&] {
        require (cm && other, "NULL argument");
        cm->cm.merge (other->cm);
    });
}

uint64_t
ps_confusion_count (const ps_confusion *cm, int gt_class, int pred_class)
{
    if (!cm || gt_class < 0 || pred_class < 0 || gt_class >= kClassCount || pred_class >= kClassCount)
        return 0;
    return cm->cm.counts[gt_class][pred_class];
}

uint64_t
ps_confusion_ignored (const ps_confusion *cm)
{
    return cm ? cm->cm.ignored : 0;
}

ps_status
ps_confusion_set_count (ps_confusion *cm, int gt_class, int pred_class, uint64_t count)
{
    return guarded ([&] {
        require (cm, "cm is NULL");
        if (gt_class < 0 || pred_class < 0 || gt_class >= kClassCount || pred_class >= kClassCount)
            throw Error (ErrorCode::ClassOutOfRange, "class index outside 0..15");
        cm->cm.counts[gt_class][pred_class] = count;
    });
}

ps_status
ps_pixel_accuracy (const ps_confusion *cm, double *out)
{
    return guarded ([&] {
        require (cm && out, "cm or out is NULL");
        *out = pixel_accuracy (cm->cm);
    });
}

ps_status
ps_per_class_accuracy (const ps_confusion *cm, double *mean, double per_class[PS_CLASS_COUNT],
                       int defined[PS_CLASS_COUNT])
{
    return guarded ([&] {
        require (cm && mean, "cm or mean is NULL");
        const PerClassAccuracy a = per_class_accuracy (cm->cm);
        *mean = a.mean;
        write_optional (a.per_class, per_class, defined);
    });
}

ps_status
ps_miou (const ps_confusion *cm, double *mean, double per_class[PS_CLASS_COUNT], int defined[PS_CLASS_COUNT])
{
    return guarded ([&] {
        require (cm && mean, "cm or mean is NULL");
        const IouResult r = miou (cm->cm);
        *mean = r.mean;
        write_optional (r.per_class, per_class, defined);
    });
}

ps_status
ps_confusion_report_json (const ps_confusion *cm, const ps_palette *palette, char **out)
{
    return guarded ([&] {
        require (cm && out, "cm or out is NULL");
        *out = dup_string (evaluation_report_json (cm->cm, palette_or_default (palette)));
    });
}

ps_status
ps_confusion_report_csv (const ps_confusion *cm, const ps_palette *palette, char **out)
{
    return guarded ([&] {
        require (cm && out, "cm or out is NULL");
        *out = dup_string (evaluation_report_csv (cm->cm, palette_or_default (palette)));
    });
}

void
ps_confusion_free (ps_confusion *cm)
{
    delete cm;
}

ps_status
ps_class_counter_create (ps_class_counter **out)
{
    return guarded ([&] {
        require (out, "out is NULL");
        *out = new ps_class_counter {};
    });
}

ps_status
ps_class_counter_add (ps_class_counter *counter, const ps_labels *labels)
{
    return guarded ([&] {
        require (counter && labels, "NULL argument");
        counter->counter.add (labels->map);
    });
}

ps_status
ps_class_counter_add_counts (ps_class_counter *counter, const uint64_t counts[PS_CLASS_COUNT])
{
    return guarded ([&] {
        require (counter && counts, "NULL argument");
        std::array<uint64_t, kClassCount> c;
        std::copy (counts, counts + kClassCount, c.begin ());
        counter->counter.add_counts (c);
    });
}

ps_status
ps_class_weights (const ps_class_counter *counter, double weights[PS_CLASS_COUNT], uint32_t *zero_mask)
{
    return guarded ([&] {
        require (counter && weights, "NULL argument");
        const ClassWeights w = counter->counter.weights ();
        std::copy (w.weights.begin (), w.weights.end (), weights);
        if (zero_mask)
            *zero_mask = static_cast<uint32_t> (w.zero_count.to_ulong ());
    });
}

ps_status
ps_class_weights_json (const ps_class_counter *counter, const ps_palette *palette, char **out)
{
    return guarded ([&] {
        require (counter && out, "NULL argument");
        *out = dup_string (class_weights_json (counter->counter.weights (), palette_or_default (palette)));
    });
}

void
ps_class_counter_free (ps_class_counter *counter)
{
    delete counter;
}

}
