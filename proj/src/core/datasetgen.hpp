/*
 * datasetgen.hpp - batch generation of panoramic segmentation datasets from
 *                  four-direction sequences
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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/image.hpp"
#include "core/regmatch.hpp"
#include "core/stitcher.hpp"

namespace panosynth {

/*
 * Input layout: <root>/<name>/<direction>/{rgb,labels}/<frame>.png for the four
 * directions. Frames are the stems found under forward/rgb, sorted.
 */
struct SequenceSpec {
    std::string name;
    std::filesystem::path root;
    std::vector<std::string> frame_ids;
    // Frames lacking one of their eight files.
    std::vector<std::string> incomplete;

    std::filesystem::path rgb_path (Direction dir, const std::string &frame) const;
    std::filesystem::path labels_path (Direction dir, const std::string &frame) const;
};

SequenceSpec discover_sequence (const std::filesystem::path &root, const std::string &name);

// Mean absolute channel difference per pixel and channel.
double mean_discrepancy (const Raster &a, const Raster &b);

/*
 * Streaming duplicate filter on the forward view: a frame is dropped when its
 * mean discrepancy against the last kept frame is below threshold. The first
 * frame is always kept.
 */
std::vector<std::string> dedup_frames (const SequenceSpec &seq, double threshold);

struct DistortionSpec {
    std::vector<double> focal_lengths {700.0, 600.0, 500.0, 400.0};

    void validate () const;
};

struct DistortionGroup {
    double focal = 0.0;
    std::vector<std::pair<Raster, LabelMap>> pairs;
};

// One group per focal length; each pair warped with r = f.
std::vector<DistortionGroup> build_distortion_series (const std::vector<std::pair<Raster, LabelMap>> &pairs,
                                                      const DistortionSpec &spec);

// Directory suffix for a focal length: "700", "532.740352".
std::string focal_tag (double f);

struct MatchSettings {
    std::optional<int> x_c1;
    int region_width = 9;
    int edge_margin = 27;
    int spread_threshold = 4;
};

struct DatasetOptions {
    double focal = kSynthiaFocalLength;
    std::optional<double> radius;
    // Unset: estimated per sequence by region matching on its first kept frame.
    std::optional<int> d;
    std::array<Direction, kRigViews> order {Direction::Left, Direction::Forward, Direction::Right, Direction::Back};
    MatchSettings match;
    std::pair<int, int> resize_to {3328, 768};
    std::vector<int> splits {90, 180, 360};
    DistortionSpec distortion;
    double dedup_threshold = 1.0;
    uint64_t seed = 0;
    int jobs = 1;
    Palette palette;

    void validate () const;
};

struct FrameFailure {
    std::string frame;
    std::string error;
};

struct SequenceReport {
    std::string name;
    std::size_t full_count = 0;
    std::vector<std::string> kept_frames;
    std::vector<FrameFailure> failures;
    int d = 0;
    std::string d_source; // "config" or "region-matching"
    std::vector<int> pair_d;
    std::string calibration_warning;
    std::vector<std::pair<std::string, int>> rotations;
    std::vector<std::string> outputs; // relative to the output root
};

// Region-matching estimate over the four cyclic seams of one frame.
RigDistance estimate_frame_distance (const SequenceSpec &seq, const std::string &frame,
                                     const CylindricalCamera &cam, const DatasetOptions &opts);

// Rotation applied to a frame's panorama; depends only on seed, sequence and frame.
int rotation_for (uint64_t seed, const std::string &sequence, const std::string &frame, int width);

SequenceReport build_sequence (const SequenceSpec &seq, const DatasetOptions &opts,
                               const std::filesystem::path &out_root);

struct DatasetResult {
    std::vector<SequenceReport> sequences;
    std::string manifest_json;
};

// Processes the named sequences (all subdirectories of input_root when empty)
// and writes <out_root>/manifest.json.
DatasetResult build_dataset (const std::filesystem::path &input_root, std::vector<std::string> sequence_names,
                             const DatasetOptions &opts, const std::filesystem::path &out_root);

std::string manifest_json (const std::vector<SequenceReport> &sequences, const DatasetOptions &opts);

// Listed outputs missing on disk (empty when the manifest is consistent).
std::vector<std::string> audit_manifest (const std::filesystem::path &out_root);

// Planar images under <in_dir>/{rgb,labels}/*.png, warped for every focal
// length into <out_dir>/distort_f<F>/{rgb,labels}/. Returns files written.
std::vector<std::string> distort_directory (const std::filesystem::path &in_dir, const DistortionSpec &spec,
                                            const Palette &palette, const std::filesystem::path &out_dir);

}
