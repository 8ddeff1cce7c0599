/*
 * panosynth_cli.cpp - command line front end: project, match, stitch,
 *                     dataset, distort, eval, weights
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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "job_config.hpp"
#include "panosynth/panosynth.h"

namespace fs = std::filesystem;
using panosynth::cli::ConfigError;
using panosynth::cli::JobConfig;

namespace {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitIo = 3, kExitProcessing = 4 };

class StatusError : public std::runtime_error
{
public:
    StatusError (ps_status s, const std::string &what)
        : std::runtime_error (what)
        , _status (s)
    {}

    int exit_code () const noexcept {
        switch (_status) {
        case PS_INVALID_ARGUMENT:
        case PS_CONFIG:
            return kExitConfig;
        case PS_IO:
        case PS_UNSUPPORTED_FORMAT:
        case PS_CORRUPT_DATA:
            return kExitIo;
        default:
            return kExitProcessing;
        }
    }
    ps_status status () const noexcept {
        return _status;
    }

private:
    ps_status _status;
};

void check (ps_status s, const std::string &context)
{
    if (s != PS_OK)
        throw StatusError (s, context + ": " + ps_last_error ());
}

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

template <typename T, void (*Free) (T *)>
struct Deleter {
    void operator() (T *p) const noexcept {
        Free (p);
    }
};

using RasterPtr = std::unique_ptr<ps_raster, Deleter<ps_raster, ps_raster_free>>;
using LabelsPtr = std::unique_ptr<ps_labels, Deleter<ps_labels, ps_labels_free>>;
using PalettePtr = std::unique_ptr<ps_palette, Deleter<ps_palette, ps_palette_free>>;
using CurvePtr = std::unique_ptr<ps_match_curve, Deleter<ps_match_curve, ps_match_curve_free>>;
using PanoramaPtr = std::unique_ptr<ps_panorama, Deleter<ps_panorama, ps_panorama_free>>;
using ConfusionPtr = std::unique_ptr<ps_confusion, Deleter<ps_confusion, ps_confusion_free>>;
using CounterPtr = std::unique_ptr<ps_class_counter, Deleter<ps_class_counter, ps_class_counter_free>>;

struct OwnedString {
    char *s = nullptr;
    ~OwnedString () {
        ps_string_free (s);
    }
    std::string str () const {
        return s ? std::string (s) : std::string ();
    }
};

RasterPtr load_raster (const std::string &path)
{
    ps_raster *r = nullptr;
    check (ps_raster_load (path.c_str (), &r), path);
    return RasterPtr (r);
}

LabelsPtr load_label_map (const std::string &path, const ps_palette *palette)
{
    ps_labels *l = nullptr;
    check (ps_labels_load (path.c_str (), palette, &l), path);
    return LabelsPtr (l);
}

PalettePtr load_palette (const JobConfig &cfg)
{
    ps_palette *p = nullptr;
    if (cfg.palette)
        check (ps_palette_load (cfg.palette->c_str (), &p), *cfg.palette);
    else
        check (ps_palette_default (&p), "palette");
    return PalettePtr (p);
}

void write_text (const fs::path &path, const std::string &text)
{
    if (path.has_parent_path ())
        fs::create_directories (path.parent_path ());
    std::ofstream out (path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text))
        throw IoError ("cannot write '" + path.string () + "'");
}

std::vector<fs::path> png_files (const fs::path &dir)
{
    std::error_code ec;
    if (!fs::is_directory (dir, ec))
        throw IoError ("'" + dir.string () + "' is not a directory");
    std::vector<fs::path> out;
    for (const auto &e : fs::directory_iterator (dir))
        if (e.is_regular_file () && e.path ().extension () == ".png")
            out.push_back (e.path ());
    std::sort (out.begin (), out.end ());
    return out;
}

double radius_arg (const JobConfig &cfg)
{
    return cfg.radius.value_or (0.0);
}

void print_plan (const std::string &command, const nlohmann::json &inputs, const JobConfig &cfg)
{
    nlohmann::json plan = {{"command", command}, {"inputs", inputs},
                           {"config", nlohmann::json::parse (cfg.to_json ())}, {"dry_run", true}};
    std::cout << plan.dump (2) << "\n";
}

ps_rig rig_from (const JobConfig &cfg, int width, int height)
{
    ps_rig rig;
    ps_rig_default (&rig);
    rig.d = cfg.d.value_or (0);
    const auto order = cfg.order_indices ();
    std::copy (order.begin (), order.end (), rig.order);
    rig.focal = cfg.focal;
    rig.radius = radius_arg (cfg);
    rig.width = width;
    rig.height = height;
    return rig;
}

// ---- project

struct ProjectArgs {
    std::string in;
    std::string out;
    bool labels = false;
};

void project_file (const fs::path &in, const fs::path &out, const JobConfig &cfg, bool labels,
                   const ps_palette *palette)
{
    if (labels) {
        LabelsPtr src = load_label_map (in.string (), palette);
        ps_labels *warped = nullptr;
        check (ps_warp_labels (src.get (), cfg.focal, radius_arg (cfg), &warped), in.string ());
        LabelsPtr w (warped);
        check (ps_labels_save (w.get (), out.string ().c_str ()), out.string ());
    } else {
        RasterPtr src = load_raster (in.string ());
        ps_raster *warped = nullptr;
        check (ps_warp_raster (src.get (), cfg.focal, radius_arg (cfg), &warped), in.string ());
        RasterPtr w (warped);
        check (ps_raster_save (w.get (), out.string ().c_str ()), out.string ());
    }
    std::cout << "wrote " << out.string () << "\n";
}

int cmd_project (const ProjectArgs &a, const JobConfig &cfg, bool dry_run)
{
    std::error_code ec;
    const bool dir_mode = fs::is_directory (a.in, ec);
    std::vector<std::pair<fs::path, fs::path>> jobs;
    if (dir_mode) {
        for (const fs::path &p : png_files (a.in))
            jobs.emplace_back (p, fs::path (a.out) / p.filename ());
    } else {
        jobs.emplace_back (a.in, a.out);
    }
    if (dry_run) {
        nlohmann::json files = nlohmann::json::array ();
        for (const auto &[src, dst] : jobs)
            files.push_back ({{"in", src.string ()}, {"out", dst.string ()}});
        print_plan ("project", {{"mode", a.labels ? "labels" : "rgb"}, {"files", files}}, cfg);
        return kExitOk;
    }
    PalettePtr palette = load_palette (cfg);
    for (const auto &[src, dst] : jobs)
        project_file (src, dst, cfg, a.labels, palette.get ());
    return kExitOk;
}

// ---- match

struct MatchArgs {
    std::string left;
    std::string forward;
    std::string csv;
    bool prewarped = false;
};

int cmd_match (const MatchArgs &a, const JobConfig &cfg, bool dry_run)
{
    if (dry_run) {
        print_plan ("match", {{"left", a.left}, {"forward", a.forward}, {"csv", a.csv}, {"prewarped", a.prewarped}},
                    cfg);
        return kExitOk;
    }
    RasterPtr i1 = load_raster (a.left);
    RasterPtr i2 = load_raster (a.forward);
    if (!a.prewarped) {
        ps_raster *w1 = nullptr;
        ps_raster *w2 = nullptr;
        check (ps_warp_raster (i1.get (), cfg.focal, radius_arg (cfg), &w1), a.left);
        i1.reset (w1);
        check (ps_warp_raster (i2.get (), cfg.focal, radius_arg (cfg), &w2), a.forward);
        i2.reset (w2);
    }
    ps_match_config mc;
    ps_match_config_default (&mc);
    mc.region_width = cfg.region_width;
    if (cfg.x_c1)
        mc.x_c1 = *cfg.x_c1;
    else
        check (ps_default_reference_column (cfg.focal, radius_arg (cfg), ps_raster_width (i1.get ()),
                                            ps_raster_height (i1.get ()), cfg.region_width, cfg.edge_margin, &mc.x_c1),
               "reference column");

    ps_match_curve *c = nullptr;
    check (ps_scan_match (i1.get (), i2.get (), &mc, &c), "region matching");
    CurvePtr curve (c);
    std::cout << "x_c1=" << mc.x_c1 << "\n"
              << "x_c2=" << ps_match_curve_best_x (curve.get ()) << "\n"
              << "dv=" << ps_match_curve_best_dv (curve.get ()) << "\n"
              << "d=" << ps_match_curve_d (curve.get ()) << "\n";
    if (!a.csv.empty ()) {
        OwnedString csv;
        check (ps_match_curve_csv (curve.get (), &csv.s), "csv");
        write_text (a.csv, csv.str ());
    }
    return kExitOk;
}

// ---- stitch

struct StitchArgs {
    std::vector<std::string> images;
    std::vector<std::string> label_files;
    std::string out;
    std::string labels_out;
    std::string sidecar;
};

int cmd_stitch (const StitchArgs &a, const JobConfig &cfg, bool dry_run)
{
    if (a.images.size () != PS_RIG_VIEWS)
        throw ConfigError ("stitch needs four images: left forward right back");
    if (!a.label_files.empty () && a.label_files.size () != PS_RIG_VIEWS)
        throw ConfigError ("--label-files needs four label maps: left forward right back");
    if (!a.labels_out.empty () && a.label_files.empty ())
        throw ConfigError ("--labels-out requires --label-files");
    const std::string sidecar = a.sidecar.empty () ? fs::path (a.out).replace_extension (".json").string ()
                                                   : a.sidecar;
    if (dry_run) {
        print_plan ("stitch", {{"images", a.images}, {"label_files", a.label_files}, {"out", a.out},
                               {"labels_out", a.labels_out}, {"sidecar", sidecar}},
                    cfg);
        return kExitOk;
    }

    PalettePtr palette = load_palette (cfg);
    std::vector<RasterPtr> imgs;
    std::vector<LabelsPtr> maps;
    const ps_raster *img_ptrs[PS_RIG_VIEWS];
    const ps_labels *map_ptrs[PS_RIG_VIEWS];
    const char *ids[PS_RIG_VIEWS];
    std::vector<std::string> id_strings;
    for (int i = 0; i < PS_RIG_VIEWS; ++i) {
        imgs.push_back (load_raster (a.images[i]));
        img_ptrs[i] = imgs.back ().get ();
        id_strings.push_back (fs::path (a.images[i]).filename ().string ());
        if (!a.label_files.empty ()) {
            maps.push_back (load_label_map (a.label_files[i], palette.get ()));
            map_ptrs[i] = maps.back ().get ();
        }
    }
    for (int i = 0; i < PS_RIG_VIEWS; ++i)
        ids[i] = id_strings[i].c_str ();

    ps_rig rig = rig_from (cfg, ps_raster_width (img_ptrs[0]), ps_raster_height (img_ptrs[0]));
    if (!cfg.d) {
        int spread = 0;
        int pair_d[PS_RIG_VIEWS];
        check (ps_estimate_rig_distance (img_ptrs, &rig, cfg.x_c1.value_or (-1), cfg.region_width,
                                         cfg.edge_margin, &rig.d, &spread, pair_d),
               "region matching");
        std::cout << "d=" << rig.d << " (region matching, pairs " << pair_d[0] << "," << pair_d[1] << ","
                  << pair_d[2] << "," << pair_d[3] << ")\n";
        if (spread > cfg.spread_threshold)
            std::cerr << "warning: per-seam distances spread by " << spread << " px; check the calibration\n";
    }

    ps_panorama *p = nullptr;
    check (ps_stitch (img_ptrs, a.label_files.empty () ? nullptr : map_ptrs, &rig, ids, &p), "stitch");
    PanoramaPtr pano (p);
    check (ps_panorama_save (pano.get (), a.out.c_str (), a.labels_out.empty () ? nullptr : a.labels_out.c_str (),
                             sidecar.c_str ()),
           "save panorama");
    std::cout << "wrote " << a.out << " (" << ps_panorama_width (pano.get ()) << "x"
              << ps_panorama_height (pano.get ()) << ")\n";
    if (!a.labels_out.empty ())
        std::cout << "wrote " << a.labels_out << "\n";
    std::cout << "wrote " << sidecar << "\n";
    return kExitOk;
}

// ---- dataset

struct DatasetArgs {
    std::string input_root;
    std::string out_root;
    std::vector<std::string> sequences;
};

int cmd_dataset (const DatasetArgs &a, const JobConfig &cfg, bool dry_run)
{
    if (dry_run) {
        print_plan ("dataset", {{"input_root", a.input_root}, {"out_root", a.out_root}, {"sequences", a.sequences}},
                    cfg);
        return kExitOk;
    }
    ps_dataset_options o;
    ps_dataset_options_default (&o);
    o.focal = cfg.focal;
    o.radius = radius_arg (cfg);
    o.d = cfg.d.value_or (0);
    const auto order = cfg.order_indices ();
    std::copy (order.begin (), order.end (), o.order);
    o.x_c1 = cfg.x_c1.value_or (-1);
    o.region_width = cfg.region_width;
    o.edge_margin = cfg.edge_margin;
    o.spread_threshold = cfg.spread_threshold;
    o.resize_width = cfg.resize_width;
    o.resize_height = cfg.resize_height;
    o.splits = cfg.splits.data ();
    o.split_count = cfg.splits.size ();
    o.distortion_focals = cfg.distortion_focals.data ();
    o.distortion_count = cfg.distortion_focals.size ();
    o.dedup_threshold = cfg.dedup_threshold;
    o.seed = cfg.seed;
    o.jobs = cfg.jobs;
    o.palette_path = cfg.palette ? cfg.palette->c_str () : nullptr;

    std::vector<const char *> names;
    for (const auto &s : a.sequences)
        names.push_back (s.c_str ());
    OwnedString manifest;
    check (ps_dataset_build (a.input_root.c_str (), names.empty () ? nullptr : names.data (), names.size (), &o,
                             a.out_root.c_str (), &manifest.s),
           "dataset");

    const auto doc = nlohmann::json::parse (manifest.str ());
    bool any_failed = false;
    for (const auto &seq : doc.at ("sequences")) {
        std::cout << seq.at ("name").get<std::string> () << ": kept " << seq.at ("kept_count") << " of "
                  << seq.at ("full_count") << " frames, " << seq.at ("outputs").size () << " files\n";
        for (const auto &f : seq.at ("failed")) {
            std::cerr << "  failed " << f.dump () << "\n";
            any_failed = true;
        }
    }
    std::cout << "wrote " << (fs::path (a.out_root) / "manifest.json").string () << "\n";
    return any_failed ? kExitProcessing : kExitOk;
}

// ---- distort

struct DistortArgs {
    std::string in_dir;
    std::string out_dir;
};

int cmd_distort (const DistortArgs &a, const JobConfig &cfg, bool dry_run)
{
    if (dry_run) {
        print_plan ("distort", {{"in_dir", a.in_dir}, {"out_dir", a.out_dir}}, cfg);
        return kExitOk;
    }
    PalettePtr palette = load_palette (cfg);
    std::size_t written = 0;
    check (ps_distort_directory (a.in_dir.c_str (), cfg.distortion_focals.data (), cfg.distortion_focals.size (),
                                 palette.get (), a.out_dir.c_str (), &written),
           "distort");
    std::cout << "wrote " << written << " files under " << a.out_dir << "\n";
    return kExitOk;
}

// ---- eval

struct EvalArgs {
    std::string gt_dir;
    std::string pred_dir;
    std::string json_out;
    std::string csv_out;
};

int cmd_eval (const EvalArgs &a, const JobConfig &cfg, bool dry_run)
{
    const std::vector<fs::path> gt_files = png_files (a.gt_dir);
    if (gt_files.empty ())
        throw StatusError (PS_EMPTY_INPUT, "no PNG label maps under '" + a.gt_dir + "'");
    if (dry_run) {
        nlohmann::json names = nlohmann::json::array ();
        for (const auto &p : gt_files)
            names.push_back (p.filename ().string ());
        print_plan ("eval", {{"gt_dir", a.gt_dir}, {"pred_dir", a.pred_dir}, {"files", names}}, cfg);
        return kExitOk;
    }
    PalettePtr palette = load_palette (cfg);
    ps_confusion *c = nullptr;
    check (ps_confusion_create (&c), "eval");
    ConfusionPtr cm (c);
    for (const fs::path &gt_path : gt_files) {
        const fs::path pred_path = fs::path (a.pred_dir) / gt_path.filename ();
        std::error_code ec;
        if (!fs::is_regular_file (pred_path, ec))
            throw IoError ("no prediction '" + pred_path.string () + "' for " + gt_path.filename ().string ());
        LabelsPtr gt = load_label_map (gt_path.string (), palette.get ());
        LabelsPtr pred = load_label_map (pred_path.string (), palette.get ());
        check (ps_confusion_accumulate (cm.get (), gt.get (), pred.get (), cfg.ignore_mask ()),
               gt_path.filename ().string ());
    }
    OwnedString json;
    check (ps_confusion_report_json (cm.get (), palette.get (), &json.s), "report");
    if (!a.json_out.empty ())
        write_text (a.json_out, json.str ());
    else
        std::cout << json.str ();
    if (!a.csv_out.empty ()) {
        OwnedString csv;
        check (ps_confusion_report_csv (cm.get (), palette.get (), &csv.s), "report");
        write_text (a.csv_out, csv.str ());
    }
    if (!a.json_out.empty ()) {
        const auto doc = nlohmann::json::parse (json.str ());
        std::cout << "images=" << gt_files.size () << " overall_accuracy=" << doc.at ("overall_accuracy").get<double> ()
                  << " miou=" << doc.at ("miou").get<double> () << "\n";
    }
    return kExitOk;
}

// ---- weights

struct WeightsArgs {
    std::string label_dir;
    std::string out;
};

int cmd_weights (const WeightsArgs &a, const JobConfig &cfg, bool dry_run)
{
    const std::vector<fs::path> files = png_files (a.label_dir);
    if (dry_run) {
        print_plan ("weights", {{"label_dir", a.label_dir}, {"maps", files.size ()}, {"out", a.out}}, cfg);
        return kExitOk;
    }
    PalettePtr palette = load_palette (cfg);
    ps_class_counter *c = nullptr;
    check (ps_class_counter_create (&c), "weights");
    CounterPtr counter (c);
    for (const fs::path &p : files) {
        LabelsPtr map = load_label_map (p.string (), palette.get ());
        check (ps_class_counter_add (counter.get (), map.get ()), p.string ());
    }
    OwnedString json;
    check (ps_class_weights_json (counter.get (), palette.get (), &json.s), "weights");
    if (a.out.empty ()) {
        std::cout << json.str ();
    } else {
        write_text (a.out, json.str ());
        std::cout << "wrote " << a.out << "\n";
    }
    return kExitOk;
}

}

int
main (int argc, char **argv)
{
    CLI::App app {"panosynth: cylindrical panorama dataset toolkit"};
    app.require_subcommand (1);
    app.fallthrough ();
    app.set_version_flag ("--version", std::string (ps_version ()));

    std::string config_path;
    bool dry_run = false;
    app.add_option ("--config", config_path, "JSON job config; flags override its values")->check (CLI::ExistingFile);
    app.add_flag ("--dry-run", dry_run, "Print the resolved plan and exit without writing");

    // Flags shared by several subcommands; each is applied only when given.
    double focal = 0.0;
    double radius = 0.0;
    int d = 0;
    int xc1 = 0;
    int region_width = 0;
    uint64_t seed = 0;
    int jobs = 0;
    std::string palette;
    std::vector<int> ignore;
    std::vector<double> focals;
    double dedup = 0.0;
    std::vector<std::string> order;

    CLI::Option *o_seed = app.add_option ("--seed", seed, "Seed for every random choice");
    CLI::Option *o_jobs = app.add_option ("--jobs", jobs, "Worker threads for batch commands");
    CLI::Option *o_palette = app.add_option ("--palette", palette, "Palette JSON (default: built-in)");

    ProjectArgs pa;
    auto *project = app.add_subcommand ("project", "Warp an image (or a directory of images) onto the cylinder");
    project->add_option ("input", pa.in, "Input PNG or directory")->required ();
    project->add_option ("output", pa.out, "Output PNG or directory")->required ();
    project->add_flag ("--labels", pa.labels, "Inputs are label maps (nearest-class sampling)");
    CLI::Option *o_f_project = project->add_option ("--f", focal, "Focal length in pixels");
    CLI::Option *o_r_project = project->add_option ("--r", radius, "Cylinder radius (default f)");

    MatchArgs ma;
    auto *match = app.add_subcommand ("match", "Estimate d between two adjacent views by region matching");
    match->add_option ("left", ma.left, "Reference image i1")->required ();
    match->add_option ("forward", ma.forward, "Neighbour image i2")->required ();
    match->add_option ("--csv", ma.csv, "Write the Dv curve as CSV");
    match->add_flag ("--prewarped", ma.prewarped, "Inputs are already cylindrical");
    CLI::Option *o_xc1 = match->add_option ("--xc1", xc1, "Reference column x_c1");
    CLI::Option *o_rw = match->add_option ("--region-width", region_width, "Region width (odd)");
    CLI::Option *o_f_match = match->add_option ("--f", focal, "Focal length in pixels");
    CLI::Option *o_r_match = match->add_option ("--r", radius, "Cylinder radius (default f)");

    StitchArgs sa;
    auto *stitch = app.add_subcommand ("stitch", "Stitch four views into a 360 degree panorama");
    stitch->add_option ("images", sa.images, "left forward right back")->required ()->expected (4);
    stitch->add_option ("-o,--out", sa.out, "Panorama PNG")->required ();
    stitch->add_option ("--label-files", sa.label_files, "Label maps: left forward right back")->expected (4);
    stitch->add_option ("--labels-out", sa.labels_out, "Panorama label PNG");
    stitch->add_option ("--sidecar", sa.sidecar, "Sidecar JSON (default: output path with a .json extension)");
    CLI::Option *o_d_stitch = stitch->add_option ("--d", d, "Rig distance d (default: region matching)");
    CLI::Option *o_f_stitch = stitch->add_option ("--f", focal, "Focal length in pixels");
    CLI::Option *o_r_stitch = stitch->add_option ("--r", radius, "Cylinder radius (default f)");
    CLI::Option *o_order = stitch->add_option ("--order", order, "Placement order of the directions")->expected (4);

    DatasetArgs da;
    auto *dataset = app.add_subcommand ("dataset", "Build a panoramic dataset from four-direction sequences");
    dataset->add_option ("input_root", da.input_root, "Root holding <seq>/<direction>/{rgb,labels}")->required ();
    dataset->add_option ("out_root", da.out_root, "Output root")->required ();
    dataset->add_option ("--sequence", da.sequences, "Sequence to process (repeatable; default all)");
    CLI::Option *o_d_dataset = dataset->add_option ("--d", d, "Rig distance d (default: region matching)");
    CLI::Option *o_f_dataset = dataset->add_option ("--f", focal, "Focal length in pixels");
    CLI::Option *o_dedup = dataset->add_option ("--dedup-threshold", dedup, "Duplicate-frame threshold");

    DistortArgs ta;
    auto *distort = app.add_subcommand ("distort", "Warp planar images at several focal lengths");
    distort->add_option ("in_dir", ta.in_dir, "Directory with rgb/ and optional labels/")->required ();
    distort->add_option ("out_dir", ta.out_dir, "Output directory")->required ();
    CLI::Option *o_focals = distort->add_option ("--focals", focals, "Focal lengths")->delimiter (',');

    EvalArgs ea;
    auto *eval = app.add_subcommand ("eval", "Compare predicted label maps against ground truth");
    eval->add_option ("gt_dir", ea.gt_dir, "Ground-truth label maps")->required ();
    eval->add_option ("pred_dir", ea.pred_dir, "Predicted label maps (matched by file name)")->required ();
    eval->add_option ("--json", ea.json_out, "Write the JSON report here instead of stdout");
    eval->add_option ("--csv", ea.csv_out, "Also write a per-class CSV report");
    CLI::Option *o_ignore = eval->add_option ("--ignore", ignore, "Ignored ground-truth classes")->delimiter (',');

    WeightsArgs wa;
    auto *weights = app.add_subcommand ("weights", "Median-frequency class weights over label maps");
    weights->add_option ("label_dir", wa.label_dir, "Directory of label PNGs")->required ();
    weights->add_option ("-o,--out", wa.out, "Write JSON here instead of stdout");

    try {
        app.parse (argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit (e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit (e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit (e);
    } catch (const CLI::ParseError &e) {
        app.exit (e);
        return kExitConfig;
    }

    try {
        JobConfig cfg = config_path.empty () ? JobConfig {} : JobConfig::load (config_path);
        for (CLI::Option *o : {o_f_project, o_f_match, o_f_stitch, o_f_dataset})
            if (o->count ())
                cfg.focal = focal;
        for (CLI::Option *o : {o_r_project, o_r_match, o_r_stitch})
            if (o->count ())
                cfg.radius = radius;
        for (CLI::Option *o : {o_d_stitch, o_d_dataset})
            if (o->count ())
                cfg.d = d;
        if (o_xc1->count ())
            cfg.x_c1 = xc1;
        if (o_rw->count ())
            cfg.region_width = region_width;
        if (o_seed->count ())
            cfg.seed = seed;
        if (o_jobs->count ())
            cfg.jobs = jobs;
        if (o_palette->count ())
            cfg.palette = palette;
        if (o_ignore->count ())
            cfg.ignore_classes = ignore;
        if (o_focals->count ())
            cfg.distortion_focals = focals;
        if (o_dedup->count ())
            cfg.dedup_threshold = dedup;
        if (o_order->count ())
            std::copy (order.begin (), order.end (), cfg.order.begin ());
        cfg.validate ();

        if (project->parsed ())
            return cmd_project (pa, cfg, dry_run);
        if (match->parsed ())
            return cmd_match (ma, cfg, dry_run);
        if (stitch->parsed ())
            return cmd_stitch (sa, cfg, dry_run);
        if (dataset->parsed ())
            return cmd_dataset (da, cfg, dry_run);
        if (distort->parsed ())
            return cmd_distort (ta, cfg, dry_run);
        if (eval->parsed ())
            return cmd_eval (ea, cfg, dry_run);
        if (weights->parsed ())
            return cmd_weights (wa, cfg, dry_run);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what () << "\n";
        return kExitConfig;
    } catch (const IoError &e) {
        std::cerr << "i/o error: " << e.what () << "\n";
        return kExitIo;
    } catch (const StatusError &e) {
        std::cerr << ps_status_name (e.status ()) << ": " << e.what () << "\n";
        return e.exit_code ();
    } catch (const fs::filesystem_error &e) {
        std::cerr << "i/o error: " << e.what () << "\n";
        return kExitIo;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what () << "\n";
        return kExitProcessing;
    }
    return kExitConfig;
}
