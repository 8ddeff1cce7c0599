/*
 * panosynth.h - C interface to the panosynth panorama dataset toolkit
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

#ifndef PANOSYNTH_H
#define PANOSYNTH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PANOSYNTH_BUILDING)
#    define PS_API __declspec(dllexport)
#  else
#    define PS_API __declspec(dllimport)
#  endif
#else
#  define PS_API __attribute__ ((visibility ("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    PS_OK = 0,
    PS_INVALID_ARGUMENT = 1,
    PS_IO = 2,
    PS_UNSUPPORTED_FORMAT = 3,
    PS_CORRUPT_DATA = 4,
    PS_DIMENSION_MISMATCH = 5,
    PS_SINGULARITY = 6,
    PS_PALETTE_MISMATCH = 7,
    PS_CLASS_OUT_OF_RANGE = 8,
    PS_INVALID_REGION = 9,
    PS_NO_CANDIDATES = 10,
    PS_COVERAGE_GAP = 11,
    PS_EMPTY_INPUT = 12,
    PS_CONFIG = 13,
    PS_INTERNAL = 100
} ps_status;

#define PS_CLASS_COUNT 16
#define PS_RIG_VIEWS 4
#define PS_SYNTHIA_FOCAL 532.740352

/* Class bit masks for evaluation; the default ignores classes 14 and 15. */
#define PS_IGNORE_NONE 0u
#define PS_IGNORE_DEFAULT ((1u << 14) | (1u << 15))

/* Directions, used as indices into the four-view arrays. */
enum { PS_LEFT = 0, PS_FORWARD = 1, PS_RIGHT = 2, PS_BACK = 3 };

typedef struct ps_raster ps_raster;
typedef struct ps_labels ps_labels;
typedef struct ps_palette ps_palette;
typedef struct ps_match_curve ps_match_curve;
typedef struct ps_panorama ps_panorama;
typedef struct ps_confusion ps_confusion;
typedef struct ps_class_counter ps_class_counter;

PS_API const char *ps_version (void);
PS_API const char *ps_status_name (ps_status status);
/* Message of the last failure on the calling thread ("" after success). */
PS_API const char *ps_last_error (void);
/* Releases strings returned through char ** out-parameters. */
PS_API void ps_string_free (char *s);

/* Palettes. Functions taking a palette accept NULL for the built-in one. */
PS_API ps_status ps_palette_default (ps_palette **out);
PS_API ps_status ps_palette_load (const char *path, ps_palette **out);
PS_API ps_status ps_palette_rgb (const ps_palette *palette, int cls, uint8_t rgb[3]);
PS_API void ps_palette_free (ps_palette *palette);

/*
 * RGB rasters with a validity mask. Pixel buffers are row-major, 3 bytes per
 * pixel; validity buffers hold one byte per pixel (nonzero = valid).
 */
PS_API ps_status ps_raster_create (int width, int height, const uint8_t *rgb, const uint8_t *valid,
                                   ps_raster **out);
PS_API ps_status ps_raster_load (const char *path, ps_raster **out);
PS_API ps_status ps_raster_save (const ps_raster *raster, const char *path);
PS_API int ps_raster_width (const ps_raster *raster);
PS_API int ps_raster_height (const ps_raster *raster);
/* Either buffer may be NULL. */
PS_API ps_status ps_raster_read (const ps_raster *raster, uint8_t *rgb, uint8_t *valid);
PS_API void ps_raster_free (ps_raster *raster);

/* Class-index maps; classes are 0..15. */
PS_API ps_status ps_labels_create (int width, int height, const uint8_t *classes, const uint8_t *valid,
                                   ps_labels **out);
PS_API ps_status ps_labels_load (const char *path, const ps_palette *palette, ps_labels **out);
PS_API ps_status ps_labels_save (const ps_labels *labels, const char *path);
PS_API int ps_labels_width (const ps_labels *labels);
PS_API int ps_labels_height (const ps_labels *labels);
PS_API ps_status ps_labels_read (const ps_labels *labels, uint8_t *classes, uint8_t *valid);
PS_API void ps_labels_free (ps_labels *labels);

/*
 * Cylindrical projection. Coordinates are centre-origin pixels. A radius
 * <= 0 selects r = f.
 */
PS_API ps_status ps_project_forward (double focal, double radius, double x, double y, double *out_x, double *out_y);
PS_API ps_status ps_project_backward (double focal, double radius, double x, double y, double *out_x,
                                      double *out_y);
/* Valid columns of the warped canvas along its centre row. */
PS_API ps_status ps_valid_band (double focal, double radius, int width, int height, int *first, int *last);
PS_API ps_status ps_warp_raster (const ps_raster *src, double focal, double radius, ps_raster **out);
PS_API ps_status ps_warp_labels (const ps_labels *src, double focal, double radius, ps_labels **out);

/* Region matching. */
typedef struct {
    int x_c1;
    int region_width;
    /* Inclusive row range of the region; row_last < 0 selects it automatically. */
    int row_first;
    int row_last;
    /* Inclusive candidate range for x_c2; scan_last < 0 scans every column. */
    int scan_first;
    int scan_last;
} ps_match_config;

PS_API void ps_match_config_default (ps_match_config *cfg);
PS_API ps_status ps_default_reference_column (double focal, double radius, int width, int height,
                                              int region_width, int edge_margin, int *out);
PS_API ps_status ps_scan_match (const ps_raster *i1, const ps_raster *i2, const ps_match_config *cfg,
                                ps_match_curve **out);
PS_API int ps_match_curve_d (const ps_match_curve *curve);
PS_API int ps_match_curve_best_x (const ps_match_curve *curve);
PS_API uint64_t ps_match_curve_best_dv (const ps_match_curve *curve);
PS_API size_t ps_match_curve_size (const ps_match_curve *curve);
PS_API ps_status ps_match_curve_at (const ps_match_curve *curve, size_t i, int *x_c2, uint64_t *dv);
PS_API ps_status ps_match_curve_csv (const ps_match_curve *curve, char **out);
PS_API void ps_match_curve_free (ps_match_curve *curve);

/* Four-view stitching. */
typedef struct {
    int d;
    /* Placement order of the directions (PS_LEFT ...). */
    int order[PS_RIG_VIEWS];
    double focal;
    /* <= 0 selects r = f. */
    double radius;
    int width;
    int height;
} ps_rig;

PS_API void ps_rig_default (ps_rig *rig);
/*
 * Estimates d from planar views indexed by direction: every view is warped with
 * the rig camera and the four cyclic neighbours in rig->order are matched
 * (rig->d is ignored). x_c1 < 0 derives the reference column from the valid
 * band. pair_d may be NULL; *spread is max - min of the per-pair distances.
 */
PS_API ps_status ps_estimate_rig_distance (const ps_raster *const images[PS_RIG_VIEWS], const ps_rig *rig, int x_c1,
                                           int region_width, int edge_margin, int *d, int *spread,
                                           int pair_d[PS_RIG_VIEWS]);
/*
 * images and labels are indexed by direction. labels may be NULL; source_ids
 * may be NULL or hold NULL entries.
 */
PS_API ps_status ps_stitch (const ps_raster *const images[PS_RIG_VIEWS], const ps_labels *const labels[PS_RIG_VIEWS],
                            const ps_rig *rig, const char *const source_ids[PS_RIG_VIEWS], ps_panorama **out);
PS_API int ps_panorama_width (const ps_panorama *pano);
PS_API int ps_panorama_height (const ps_panorama *pano);
PS_API ps_status ps_panorama_rgb (const ps_panorama *pano, ps_raster **out);
/* PS_EMPTY_INPUT when the panorama carries no labels. */
PS_API ps_status ps_panorama_labels (const ps_panorama *pano, ps_labels **out);
PS_API ps_status ps_panorama_sidecar (const ps_panorama *pano, char **out);
PS_API ps_status ps_panorama_rotate (const ps_panorama *pano, int start_column, ps_panorama **out);
PS_API ps_status ps_panorama_resize (const ps_panorama *pano, int width, int height, ps_panorama **out);
/*
 * fov 90 / 180 / 360 -> 4 / 2 / 1 crops, left to right. Crops are written to
 * rgb_out[0..count); labels_out may be NULL and is left untouched for a
 * panorama without labels.
 */
PS_API ps_status ps_panorama_split (const ps_panorama *pano, int fov, ps_raster **rgb_out, ps_labels **labels_out,
                                    size_t capacity, size_t *count);
/* labels_path and sidecar_path may be NULL. */
PS_API ps_status ps_panorama_save (const ps_panorama *pano, const char *rgb_path, const char *labels_path,
                                   const char *sidecar_path);
PS_API void ps_panorama_free (ps_panorama *pano);

/* Dataset generation. */
typedef struct {
    double focal;
    double radius;          /* <= 0: r = f */
    int d;                  /* <= 0: estimated by region matching */
    int order[PS_RIG_VIEWS];
    int x_c1;               /* < 0: derived from the valid band */
    int region_width;
    int edge_margin;
    int spread_threshold;
    int resize_width;
    int resize_height;
    const int *splits;
    size_t split_count;
    const double *distortion_focals;
    size_t distortion_count;
    double dedup_threshold;
    uint64_t seed;
    int jobs;
    const char *palette_path; /* NULL: built-in */
} ps_dataset_options;

/* Fills every field with its documented default (splits 90/180/360, focal lengths 700/600/500/400). */
PS_API void ps_dataset_options_default (ps_dataset_options *opts);
/* sequences may be NULL (all subdirectories); manifest_json may be NULL. */
PS_API ps_status ps_dataset_build (const char *input_root, const char *const *sequences, size_t sequence_count,
                                   const ps_dataset_options *opts, const char *out_root, char **manifest_json);
PS_API ps_status ps_distort_directory (const char *in_dir, const double *focals, size_t focal_count,
                                       const ps_palette *palette, const char *out_dir, size_t *files_written);

/* Evaluation. */
PS_API ps_status ps_confusion_create (ps_confusion **out);
PS_API ps_status ps_confusion_accumulate (ps_confusion *cm, const ps_labels *gt, const ps_labels *pred,
                                          uint32_t ignore_mask);
PS_API ps_status ps_confusion_merge (ps_confusion *cm, const ps_confusion *other);
PS_API uint64_t ps_confusion_count (const ps_confusion *cm, int gt_class, int pred_class);
PS_API uint64_t ps_confusion_ignored (const ps_confusion *cm);
PS_API ps_status ps_confusion_set_count (ps_confusion *cm, int gt_class, int pred_class, uint64_t count);
PS_API ps_status ps_pixel_accuracy (const ps_confusion *cm, double *out);
/* per_class and defined may be NULL; undefined classes read 0 with defined = 0. */
PS_API ps_status ps_per_class_accuracy (const ps_confusion *cm, double *mean, double per_class[PS_CLASS_COUNT],
                                        int defined[PS_CLASS_COUNT]);
PS_API ps_status ps_miou (const ps_confusion *cm, double *mean, double per_class[PS_CLASS_COUNT],
                          int defined[PS_CLASS_COUNT]);
PS_API ps_status ps_confusion_report_json (const ps_confusion *cm, const ps_palette *palette, char **out);
PS_API ps_status ps_confusion_report_csv (const ps_confusion *cm, const ps_palette *palette, char **out);
PS_API void ps_confusion_free (ps_confusion *cm);

/* Median-frequency class weights. */
PS_API ps_status ps_class_counter_create (ps_class_counter **out);
PS_API ps_status ps_class_counter_add (ps_class_counter *counter, const ps_labels *labels);
PS_API ps_status ps_class_counter_add_counts (ps_class_counter *counter, const uint64_t counts[PS_CLASS_COUNT]);
/* zero_mask bit c is set for classes without pixels; may be NULL. */
PS_API ps_status ps_class_weights (const ps_class_counter *counter, double weights[PS_CLASS_COUNT],
                                   uint32_t *zero_mask);
PS_API ps_status ps_class_weights_json (const ps_class_counter *counter, const ps_palette *palette, char **out);
PS_API void ps_class_counter_free (ps_class_counter *counter);

#ifdef __cplusplus
}
#endif

#endif
