/*
 * datasetgen.cpp - batch generation of panoramic segmentation datasets from
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

#include "core/datasetgen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "core/png_io.hpp"

namespace fs = std::filesystem;

namespace panosynth {

namespace {

constexpr std::array<Direction, kRigViews> kAllDirections {
    Direction::Left, Direction::Forward, Direction::Right, Direction::Back};

uint64_t fnv1a (std::string_view s, uint64_t h = 1469598103934665603ull) noexcept
{
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> png_stems (const fs::path &dir)
{
    std::vector<std::string> out;
    std::error_code ec;
    if (!fs::is_directory (dir, ec))
        return out;
    for (const auto &entry : fs::directory_iterator (dir)) {
        if (entry.is_regular_file () && entry.path ().extension () == ".png")
            out.push_back (entry.path ().stem ().string ());
    }
    std::sort (out.begin (), out.end ());
    return out;
}

std::string rel (const fs::path &p)
{
    return p.generic_string ();
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; fn must not throw.
template <typename Fn>
void parallel_for (std::size_t n, int jobs, Fn fn)
{
    const std::size_t workers = std::min<std::size_t> (std::max (jobs, 1), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn (i);
        return;
    }
    std::atomic<std::size_t> next {0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back ([&] {
            for (std::size_t i = next++; i < n; i = next++)
                fn (i);
        });
    for (auto &t : pool)
        t.join ();
}

struct FrameOutput {
    bool ok = false;
    std::string error;
    int rotation = 0;
    std::vector<std::string> files;
};

}

fs::path
SequenceSpec::rgb_path (Direction dir, const std::string &frame) const
{
    return root / name / direction_name (dir) / "rgb" / (frame + ".png");
}

fs::path
SequenceSpec::labels_path (Direction dir, const std::string &frame) const
{
    return root / name / direction_name (dir) / "labels" / (frame + ".png");
}

SequenceSpec
discover_sequence (const fs::path &root, const std::string &name)
{
    SequenceSpec seq;
    seq.name = name;
    seq.root = root;
    const fs::path forward = root / name / "forward" / "rgb";
    std::error_code ec;
    if (!fs::is_directory (forward, ec))
        throw Error (ErrorCode::Io, "sequence '" + name + "' has no directory " + forward.string ());

    for (const std::string &frame : png_stems (forward)) {
        bool complete = true;
        for (Direction dir : kAllDirections)
            complete = complete && fs::is_regular_file (seq.rgb_path (dir, frame), ec) &&
                       fs::is_regular_file (seq.labels_path (dir, frame), ec);
        (complete ? seq.frame_ids : seq.incomplete).push_back (frame);
    }
    return seq;
}

double
mean_discrepancy (const Raster &a, const Raster &b)
{
    if (a.width () != b.width () || a.height () != b.height ())
        throw Error (ErrorCode::DimensionMismatch, "frames differ in size");
    return static_cast<double> (discrepancy (a.data (), b.data ())) / static_cast<double> (a.data ().size ());
}

namespace {

// failures == nullptr: unreadable frames throw; otherwise they are recorded and skipped.
std::vector<std::string> dedup_impl (const SequenceSpec &seq, double threshold, std::vector<FrameFailure> *failures)
{
    std::vector<std::string> kept;
    Raster last;
    for (const std::string &frame : seq.frame_ids) {
        Raster cur;
        try {
            cur = load_image (seq.rgb_path (Direction::Forward, frame).string ());
        } catch (const Error &e) {
            if (!failures)
                throw;
            failures->push_back ({frame, std::string (error_code_name (e.code ())) + ": " + e.what ()});
            continue;
        }
        if (!kept.empty () && cur.width () == last.width () && cur.height () == last.height () &&
                mean_discrepancy (cur, last) < threshold)
            continue;
        kept.push_back (frame);
        last = std::move (cur);
    }
    return kept;
}

}

std::vector<std::string>
dedup_frames (const SequenceSpec &seq, double threshold)
{
    if (seq.frame_ids.empty ())
        throw Error (ErrorCode::EmptyInput, "sequence '" + seq.name + "' has no frames");
    return dedup_impl (seq, threshold, nullptr);
}

void
DistortionSpec::validate () const
{
    for (double f : focal_lengths)
        if (!(f > 0.0) || !std::isfinite (f))
            throw Error (ErrorCode::Config, "distortion focal lengths must be positive");
}

std::vector<DistortionGroup>
build_distortion_series (const std::vector<std::pair<Raster, LabelMap>> &pairs, const DistortionSpec &spec)
{
    spec.validate ();
    std::vector<DistortionGroup> groups;
    for (double f : spec.focal_lengths) {
        DistortionGroup g;
        g.focal = f;
        for (const auto &[rgb, labels] : pairs) {
            const CylindricalCamera cam (f, f, rgb.width (), rgb.height ());
            g.pairs.emplace_back (warp_to_cylinder (rgb, cam), warp_to_cylinder (labels, cam));
        }
        groups.push_back (std::move (g));
    }
    return groups;
}

std::string
focal_tag (double f)
{
    std::ostringstream s;
    s.precision (12);
    s << f;
    return s.str ();
}

void
DatasetOptions::validate () const
{
    if (!(focal > 0.0) || !std::isfinite (focal))
        throw Error (ErrorCode::Config, "focal length must be positive");
    if (radius && (!(*radius > 0.0) || !std::isfinite (*radius)))
        throw Error (ErrorCode::Config, "cylinder radius must be positive");
    if (d && *d <= 0)
        throw Error (ErrorCode::Config, "d must be positive");
    if (std::set<Direction> (order.begin (), order.end ()).size () != kRigViews)
        throw Error (ErrorCode::Config, "order must be a permutation of left/forward/right/back");
    if (match.region_width < 1 || match.region_width % 2 == 0)
        throw Error (ErrorCode::Config, "match region width must be odd and >= 1");
    if (match.edge_margin < 0 || match.spread_threshold < 0)
        throw Error (ErrorCode::Config, "match margins must be >= 0");
    if (resize_to.first < 1 || resize_to.second < 1)
        throw Error (ErrorCode::Config, "resize target must be >= 1x1");
    for (int fov : splits) {
        if (fov != 90 && fov != 180 && fov != 360)
            throw Error (ErrorCode::Config, "splits must be 90, 180 or 360");
        const int parts = 360 / fov;
        if (resize_to.first % (parts * 16) != 0)
            throw Error (ErrorCode::Config, "resize width " + std::to_string (resize_to.first) +
                         " is not divisible by " + std::to_string (parts * 16) + " for the " +
                         std::to_string (fov) + " degree split");
    }
    distortion.validate ();
    if (!(dedup_threshold >= 0.0))
        throw Error (ErrorCode::Config, "dedup threshold must be >= 0");
    if (jobs < 1)
        throw Error (ErrorCode::Config, "jobs must be >= 1");
}

RigDistance
estimate_frame_distance (const SequenceSpec &seq, const std::string &frame, const CylindricalCamera &cam,
                         const DatasetOptions &opts)
{
    std::array<Raster, kRigViews> warped;
    for (Direction dir : kAllDirections)
        warped[static_cast<int> (dir)] = warp_to_cylinder (load_image (seq.rgb_path (dir, frame).string ()), cam);

    MatchConfig cfg;
    cfg.region_width = opts.match.region_width;
    cfg.x_c1 = opts.match.x_c1.value_or (default_reference_column (cam, cfg.region_width, opts.match.edge_margin));

    std::vector<std::pair<Raster, Raster>> pairs;
    for (int k = 0; k < kRigViews; ++k) {
        const int a = static_cast<int> (opts.order[k]);
        const int b = static_cast<int> (opts.order[(k + 1) % kRigViews]);
        pairs.emplace_back (warped[a], warped[b]);
    }
    return estimate_rig_distance (pairs, cfg, opts.match.spread_threshold);
}

int
rotation_for (uint64_t seed, const std::string &sequence, const std::string &frame, int width)
{
    std::mt19937_64 rng (seed ^ fnv1a (sequence + "/" + frame));
    return static_cast<int> (rng () % static_cast<uint64_t> (width));
}

SequenceReport
build_sequence (const SequenceSpec &seq, const DatasetOptions &opts, const fs::path &out_root)
{
    opts.validate ();
    SequenceReport report;
    report.name = seq.name;
    report.full_count = seq.frame_ids.size () + seq.incomplete.size ();
    for (const auto &frame : seq.incomplete)
        report.failures.push_back ({frame, "missing one or more of the eight input files"});
    if (seq.frame_ids.empty ())
        return report;

    report.kept_frames = dedup_impl (seq, opts.dedup_threshold, &report.failures);
    if (report.kept_frames.empty ())
        return report;

    const Raster probe = load_image (seq.rgb_path (Direction::Forward, report.kept_frames.front ()).string ());
    const CylindricalCamera cam (opts.focal, opts.radius.value_or (opts.focal), probe.width (), probe.height ());

    RigCalibration calib;
    calib.cam = cam;
    calib.order = opts.order;
    if (opts.d) {
        calib.d = *opts.d;
        report.d_source = "config";
    } else {
        const RigDistance est = estimate_frame_distance (seq, report.kept_frames.front (), cam, opts);
        calib.d = est.d;
        report.d_source = "region-matching";
        for (const auto &c : est.curves)
            report.pair_d.push_back (c.d);
        report.calibration_warning = est.warning;
    }
    report.d = calib.d;
    calib.validate ();

    const fs::path seq_rel = seq.name;
    std::vector<FrameOutput> results (report.kept_frames.size ());
    parallel_for (results.size (), opts.jobs, [&] (std::size_t i) {
        const std::string &frame = report.kept_frames[i];
        FrameOutput &res = results[i];
        try {
            std::array<Raster, kRigViews> rgb;
            std::array<LabelMap, kRigViews> labels;
            std::array<std::string, kRigViews> ids;
            for (Direction dir : kAllDirections) {
                const int k = static_cast<int> (dir);
                rgb[k] = load_image (seq.rgb_path (dir, frame).string ());
                labels[k] = load_labels (seq.labels_path (dir, frame).string (), opts.palette);
                ids[k] = seq.name + "/" + direction_name (dir) + "/" + frame;
            }

            Panorama pano = stitch_panorama (rgb, labels, calib, ids);
            res.rotation = rotation_for (opts.seed, seq.name, frame, pano.rgb.width ());
            pano = rotate_start (pano, res.rotation);

            auto emit_pair = [&] (const fs::path &dir, const std::string &stem, const Raster &r, const LabelMap &l) {
                const fs::path rgb_rel = seq_rel / dir / "rgb" / (stem + ".png");
                const fs::path lab_rel = seq_rel / dir / "labels" / (stem + ".png");
                save_image (r, (out_root / rgb_rel).string ());
                save_labels (l, (out_root / lab_rel).string ());
                res.files.push_back (rel (rgb_rel));
                res.files.push_back (rel (lab_rel));
            };

            emit_pair ("pano", frame, pano.rgb, *pano.labels);
            const fs::path meta_rel = seq_rel / "pano" / "meta" / (frame + ".json");
            fs::create_directories ((out_root / meta_rel).parent_path ());
            std::ofstream (out_root / meta_rel, std::ios::binary) << pano.sidecar_json ();
            res.files.push_back (rel (meta_rel));

            if (!opts.splits.empty ()) {
                const Panorama resized = resize_panorama (pano, opts.resize_to.first, opts.resize_to.second);
                for (int fov : opts.splits) {
                    const auto crops = split_by_fov (resized, fov);
                    for (std::size_t k = 0; k < crops.size (); ++k)
                        emit_pair ("fov" + std::to_string (fov), frame + "_" + std::to_string (k),
                                   crops[k].rgb, *crops[k].labels);
                }
            }

            if (!opts.distortion.focal_lengths.empty ()) {
                std::vector<std::pair<Raster, LabelMap>> planar;
                for (int k = 0; k < kRigViews; ++k)
                    planar.emplace_back (rgb[k], labels[k]);
                const auto groups = build_distortion_series (planar, opts.distortion);
                for (const auto &g : groups)
                    for (int k = 0; k < kRigViews; ++k)
                        emit_pair ("distort_f" + focal_tag (g.focal),
                                   frame + "_" + direction_name (static_cast<Direction> (k)),
                                   g.pairs[k].first, g.pairs[k].second);
            }
            res.ok = true;
        } catch (const Error &e) {
            res.error = std::string (error_code_name (e.code ())) + ": " + e.what ();
        } catch (const std::exception &e) {
            res.error = e.what ();
        }
    });

    for (std::size_t i = 0; i < results.size (); ++i) {
        const auto &res = results[i];
        if (!res.ok) {
            report.failures.push_back ({report.kept_frames[i], res.error});
            continue;
        }
        report.rotations.emplace_back (report.kept_frames[i], res.rotation);
        report.outputs.insert (report.outputs.end (), res.files.begin (), res.files.end ());
    }
    return report;
}

std::string
manifest_json (const std::vector<SequenceReport> &sequences, const DatasetOptions &opts)
{
    using nlohmann::json;
    json params;
    params["f"] = opts.focal;
    params["r"] = opts.radius.value_or (opts.focal);
    params["d"] = opts.d ? json (*opts.d) : json (nullptr);
    json order = json::array ();
    for (Direction dir : opts.order)
        order.push_back (direction_name (dir));
    params["order"] = order;
    params["match"] = {
        {"x_c1", opts.match.x_c1 ? json (*opts.match.x_c1) : json (nullptr)},
        {"region_width", opts.match.region_width},
        {"edge_margin", opts.match.edge_margin},
        {"spread_threshold", opts.match.spread_threshold},
    };
    params["resize"] = {opts.resize_to.first, opts.resize_to.second};
    params["splits"] = opts.splits;
    params["distortion_focal_lengths"] = opts.distortion.focal_lengths;
    params["dedup_threshold"] = opts.dedup_threshold;
    params["seed"] = opts.seed;

    json seqs = json::array ();
    for (const auto &s : sequences) {
        json failures = json::array ();
        for (const auto &f : s.failures)
            failures.push_back ({{"frame", f.frame}, {"error", f.error}});
        json rotations = json::array ();
        for (const auto &[frame, col] : s.rotations)
            rotations.push_back ({{"frame", frame}, {"start_column", col}});
        json calib = {{"d", s.d}, {"source", s.d_source}, {"pair_d", s.pair_d}};
        if (!s.calibration_warning.empty ())
            calib["warning"] = s.calibration_warning;
        seqs.push_back ({
            {"name", s.name},
            {"full_count", s.full_count},
            {"kept_count", s.kept_frames.size ()},
            {"kept_frames", s.kept_frames},
            {"failed", failures},
            {"calibration", calib},
            {"rotations", rotations},
            {"outputs", s.outputs},
        });
    }
    json doc = {{"format", "panosynth-dataset/1"}, {"parameters", params}, {"sequences", seqs}};
    return doc.dump (2) + "\n";
}

DatasetResult
build_dataset (const fs::path &input_root, std::vector<std::string> sequence_names, const DatasetOptions &opts,
               const fs::path &out_root)
{
    opts.validate ();
    std::error_code ec;
    if (!fs::is_directory (input_root, ec))
        throw Error (ErrorCode::Io, "input root '" + input_root.string () + "' is not a directory");
    if (sequence_names.empty ()) {
        for (const auto &entry : fs::directory_iterator (input_root))
            if (entry.is_directory ())
                sequence_names.push_back (entry.path ().filename ().string ());
        std::sort (sequence_names.begin (), sequence_names.end ());
    }
    if (sequence_names.empty ())
        throw Error (ErrorCode::EmptyInput, "no sequences under '" + input_root.string () + "'");

    DatasetResult result;
    for (const auto &name : sequence_names)
        result.sequences.push_back (build_sequence (discover_sequence (input_root, name), opts, out_root));

    result.manifest_json = manifest_json (result.sequences, opts);
    fs::create_directories (out_root);
    std::ofstream out (out_root / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error (ErrorCode::Io, "cannot write manifest under '" + out_root.string () + "'");
    out << result.manifest_json;
    return result;
}

std::vector<std::string>
audit_manifest (const fs::path &out_root)
{
    std::ifstream in (out_root / "manifest.json");
    if (!in)
        throw Error (ErrorCode::Io, "no manifest.json under '" + out_root.string () + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse (in);
    } catch (const nlohmann::json::exception &e) {
        throw Error (ErrorCode::CorruptData, std::string ("manifest.json: ") + e.what ());
    }
    std::vector<std::string> missing;
    std::error_code ec;
    for (const auto &seq : doc.at ("sequences"))
        for (const auto &path : seq.at ("outputs"))
            if (!fs::is_regular_file (out_root / path.get<std::string> (), ec))
                missing.push_back (path.get<std::string> ());
    return missing;
}

std::vector<std::string>
distort_directory (const fs::path &in_dir, const DistortionSpec &spec, const Palette &palette, const fs::path &out_dir)
{
    spec.validate ();
    const std::vector<std::string> stems = png_stems (in_dir / "rgb");
    if (stems.empty ())
        throw Error (ErrorCode::EmptyInput, "no PNG files under '" + (in_dir / "rgb").string () + "'");

    std::vector<std::string> written;
    std::error_code ec;
    for (const std::string &stem : stems) {
        const Raster rgb = load_image ((in_dir / "rgb" / (stem + ".png")).string ());
        const fs::path label_file = in_dir / "labels" / (stem + ".png");
        std::optional<LabelMap> labels;
        if (fs::is_regular_file (label_file, ec))
            labels = load_labels (label_file.string (), palette);
        for (double f : spec.focal_lengths) {
            const CylindricalCamera cam (f, f, rgb.width (), rgb.height ());
            const fs::path group = out_dir / ("distort_f" + focal_tag (f));
            const fs::path rgb_out = group / "rgb" / (stem + ".png");
            save_image (warp_to_cylinder (rgb, cam), rgb_out.string ());
            written.push_back (rgb_out.string ());
            if (labels) {
                const fs::path lab_out = group / "labels" / (stem + ".png");
                save_labels (warp_to_cylinder (*labels, cam), lab_out.string ());
                written.push_back (lab_out.string ());
            }
        }
    }
    return written;
}

}
