/*
 * acceptance.cpp - end-to-end acceptance checks, one PASS/FAIL line each
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

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "core/cylproj.hpp"
#include "core/regmatch.hpp"
#include "core/segmetrics.hpp"
#include "core/stitcher.hpp"
#include "support.hpp"

using namespace panosynth;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since (Clock::time_point t0)
{
    return std::chrono::duration<double> (Clock::now () - t0).count ();
}

std::string fmt (const char *f, auto... args)
{
    char buf[512];
    std::snprintf (buf, sizeof buf, f, args...);
    return buf;
}

// 1. Projection round trip.
Outcome projection_round_trip ()
{
    const CylindricalCamera cam (kSynthiaFocalLength, 1280, 760);
    const double f = cam.focal ();
    std::mt19937_64 rng (1);
    std::uniform_real_distribution<double> coord (-4.0 * f, 4.0 * f);
    std::vector<ImagePoint> pts (100000);
    for (auto &p : pts)
        p = {coord (rng), coord (rng)};

    const auto t0 = Clock::now ();
    double worst = 0.0;
    for (const auto &p : pts) {
        const ImagePoint q = project_backward (project_forward (p, cam), cam);
        worst = std::max (worst, std::hypot (q.x - p.x, q.y - p.y));
    }
    const double t = seconds_since (t0);
    return {worst < 1e-9 && t < 1.0, fmt ("max error %.3g px over 1e5 points in %.3f s", worst, t)};
}

/*
 * Views cut from a strip with cylinder radius equal to the camera focal length
 * land on the warped canvas shifted by exactly their strip spacing.
 */
Outcome paper_geometry ()
{
    const double f = kSynthiaFocalLength;
    const int spacing = 836;
    const Raster strip = test::PeriodicTexture (4 * spacing, 760, 2).render ();
    const test::RigViews views = test::cut_rig (strip, nullptr, 600.0, spacing, f, f, 1280, 760);
    const CylindricalCamera cam (f, 1280, 760);

    std::vector<std::pair<Raster, Raster>> pairs;
    for (int k = 0; k < 4; ++k)
        pairs.emplace_back (warp_to_cylinder (views.rgb[k], cam), warp_to_cylinder (views.rgb[(k + 1) % 4], cam));
    MatchConfig cfg;
    cfg.x_c1 = 1075;
    const RigDistance rig = estimate_rig_distance (pairs, cfg);
    const int x_c2 = rig.curves[0].best_x_c2;

    RigCalibration calib;
    calib.d = rig.d;
    calib.cam = cam;
    const Panorama p = stitch_panorama (views.rgb, std::nullopt, calib);
    const bool ok = std::abs (x_c2 - 239) <= 2 && std::abs (rig.d - 836) <= 2 && p.rgb.width () == 4 * rig.d &&
                    p.rgb.height () == 760 && std::abs (p.rgb.width () - 3340) <= 4;
    return {ok, fmt ("x_c2=%d d=%d panorama %dx%d", x_c2, rig.d, p.rgb.width (), p.rgb.height ())};
}

// 3. Strip -> four 100 degree views -> match -> stitch -> compare with the strip.
Outcome synthetic_rig ()
{
    const auto t0 = Clock::now ();
    const int ws = 4000, h = 760, d_true = ws / 4;
    const double radius = ws / (2.0 * std::numbers::pi);
    const double f = radius;
    const int w = static_cast<int> (std::floor (2.0 * f * std::tan (50.0 * std::numbers::pi / 180.0))) | 1;
    const double c0 = 900.0;

    const Raster strip = test::PeriodicTexture (ws, h, 3).render ();
    const test::RigViews views = test::cut_rig (strip, nullptr, c0, d_true, f, radius, w, h);
    const CylindricalCamera cam (f, radius, w, h);

    std::vector<std::pair<Raster, Raster>> pairs;
    std::array<Raster, 4> warped;
    for (int k = 0; k < 4; ++k)
        warped[k] = warp_to_cylinder (views.rgb[k], cam);
    for (int k = 0; k < 4; ++k)
        pairs.emplace_back (warped[k], warped[(k + 1) % 4]);
    MatchConfig cfg;
    cfg.x_c1 = default_reference_column (cam);
    const RigDistance rig = estimate_rig_distance (pairs, cfg);

    RigCalibration calib;
    calib.d = rig.d;
    calib.cam = cam;
    const Panorama p = stitch_panorama (views.rgb, std::nullopt, calib);

    const int origin = warped_valid_columns (cam).first;
    double total = 0.0;
    std::size_t n = 0;
    for (int y = 2; y < h - 2; ++y)
        for (int x = 0; x < p.rgb.width (); ++x) {
            if (!p.rgb.is_valid (x, y))
                continue;
            const int u = ((x + origin - (w - 1) / 2 + static_cast<int> (c0)) % ws + ws) % ws;
            const Rgb a = p.rgb.at (x, y), b = strip.at (u, y);
            for (int c = 0; c < 3; ++c)
                total += std::abs (a[c] - b[c]);
            n += 3;
        }
    const double mae = total / static_cast<double> (n);
    const double t = seconds_since (t0);
    const bool ok = std::abs (rig.d - d_true) <= 1 && mae <= 2.0 && t < 30.0;
    return {ok, fmt ("views %dx%d, d=%d (truth %d), MAE %.3f over %zu samples, %.2f s", w, h, rig.d, d_true, mae, n, t)};
}

// 4. Exact shift recovery.
Outcome shift_recovery ()
{
    std::mt19937_64 rng (4);
    int recovered = 0;
    for (int i = 0; i < 100; ++i) {
        const int w = std::uniform_int_distribution<int> (64, 400) (rng);
        const int h = std::uniform_int_distribution<int> (4, 32) (rng);
        const Raster i1 = test::random_raster (rng, w, h);
        const int s = std::uniform_int_distribution<int> (0, w - 24) (rng);
        Raster i2 = test::random_raster (rng, w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x + s < w; ++x)
                i2.set (x, y, i1.at (x + s, y));
        MatchConfig cfg;
        cfg.x_c1 = std::uniform_int_distribution<int> (s + 4, w - 5) (rng);
        const MatchCurve c = scan_match (i1, i2, cfg);
        recovered += c.d == s && c.best_dv == 0;
    }
    return {recovered == 100, fmt ("%d of 100 shifts recovered with Dv = 0", recovered)};
}

// 5. Valid band width against 2 f atan(W / 2f).
Outcome band_widths ()
{
    bool ok = true;
    std::string detail;
    std::map<double, int> widths;
    for (double f : {400.0, 500.0, 532.740352, 600.0, 700.0}) {
        const int got = warped_valid_columns (CylindricalCamera (f, 1280, 760)).width ();
        const double expect = 2.0 * f * std::atan (1280.0 / (2.0 * f));
        ok = ok && std::abs (got - expect) <= 1.0;
        widths[f] = got;
        detail += fmt ("f=%g:%d(%.2f) ", f, got, expect);
    }
    int prev = 0;
    for (const auto &[f, wdt] : widths) {
        ok = ok && wdt > prev;
        prev = wdt;
    }
    return {ok, detail + "monotone"};
}

// 6. Metrics against a per-pixel set computation.
Outcome metrics_oracle ()
{
    std::mt19937_64 rng (6);
    int exact = 0, cases = 0;
    for (int i = 0; i < 1000; ++i) {
        const int w = std::uniform_int_distribution<int> (1, 8) (rng);
        const int h = std::uniform_int_distribution<int> (1, 8) (rng);
        const int k = std::uniform_int_distribution<int> (1, kClassCount) (rng);
        const LabelMap gt = test::random_labels (rng, w, h, k);
        const LabelMap pred = test::random_labels (rng, w, h, k);
        ConfusionMatrix cm;
        accumulate (cm, gt, pred);
        ++cases;

        std::array<std::set<int>, kClassCount> g, p;
        int hits = 0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                g[gt.at (x, y)].insert (y * w + x);
                p[pred.at (x, y)].insert (y * w + x);
                hits += gt.at (x, y) == pred.at (x, y);
            }
        double sum = 0.0;
        int defined = 0;
        for (int c = 0; c < kClassCount; ++c) {
            std::set<int> uni (g[c]);
            uni.insert (p[c].begin (), p[c].end ());
            if (uni.empty ())
                continue;
            int inter = 0;
            for (int id : g[c])
                inter += static_cast<int> (p[c].count (id));
            sum += static_cast<double> (inter) / static_cast<double> (uni.size ());
            ++defined;
        }
        const double acc = static_cast<double> (hits) / static_cast<double> (w * h);
        exact += miou (cm).mean == sum / defined && pixel_accuracy (cm) == acc;
    }
    ConfusionMatrix hand;
    hand.counts[0] = {3, 1};
    hand.counts[1] = {2, 4};
    const double m = miou (hand).mean;
    const bool ok = exact == cases && std::abs (m - 0.5357142857142857) < 1e-12;
    return {ok, fmt ("%d of %d random pairs exact; hand case mIoU %.13f", exact, cases, m)};
}

// 7. Median-frequency weights.
Outcome class_weights ()
{
    std::array<uint64_t, kClassCount> counts {};
    counts[0] = 100;
    counts[1] = 400;
    counts[2] = 1600;
    const ClassWeights w = class_weights_from_counts (counts);
    std::array<uint64_t, kClassCount> uniform;
    uniform.fill (5000);
    const ClassWeights u = class_weights_from_counts (uniform);
    const bool all_one = std::all_of (u.weights.begin (), u.weights.end (), [] (double v) { return v == 1.0; });
    const bool ok = w.weights[0] == 4.0 && w.weights[1] == 1.0 && w.weights[2] == 0.25 && all_one;
    return {ok, fmt ("weights {%g, %g, %g}; uniform all 1: %s", w.weights[0], w.weights[1], w.weights[2],
                     all_one ? "yes" : "no")};
}

// 8. FoV split partition.
Outcome fov_split ()
{
    std::mt19937_64 rng (8);
    Panorama p;
    p.rgb = test::random_raster (rng, 3328, 768);
    p.labels = test::random_labels (rng, 3328, 768);
    bool ok = true;
    std::string detail;
    for (int fov : {90, 180}) {
        const auto crops = split_by_fov (p, fov);
        Raster joined = make_blank<Raster> (3328, 768);
        LabelMap joined_labels = make_blank<LabelMap> (3328, 768);
        int x = 0;
        for (const auto &c : crops) {
            ok = ok && c.rgb.width () == 3328 * fov / 360 && c.rgb.height () == 768;
            compose_into (joined, c.rgb, x, 0);
            compose_into (joined_labels, *c.labels, x, 0);
            x += c.rgb.width ();
        }
        ok = ok && joined == p.rgb && joined_labels == *p.labels;
        detail += fmt ("%d deg: %zu x %dx%d; ", fov, crops.size (), crops[0].rgb.width (), crops[0].rgb.height ());
    }
    return {ok, detail + (ok ? "bit-identical" : "mismatch")};
}

uint64_t fnv1a_file (const fs::path &p)
{
    std::ifstream in (p, std::ios::binary);
    uint64_t h = 0xcbf29ce484222325ull;
    char c;
    while (in.get (c)) {
        h ^= static_cast<uint8_t> (c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::map<std::string, uint64_t> tree_hashes (const fs::path &root)
{
    std::map<std::string, uint64_t> out;
    for (const auto &e : fs::recursive_directory_iterator (root))
        if (e.is_regular_file ())
            out[fs::relative (e.path (), root).string ()] = fnv1a_file (e.path ());
    return out;
}

// 9. Two dataset runs with one seed.
Outcome determinism ()
{
    const test::TempDir tmp ("panosynth-acceptance");
    test::write_sequence (tmp.path () / "in", "seq_a", {20.0, 37.0, 54.0});
    test::write_sequence (tmp.path () / "in", "seq_b", {300.0, 310.0}, {320, 190, kSynthiaFocalLength / 4, 209, 99});
    std::ofstream (tmp.path () / "job.json")
        << R"({"f": 133.185088, "resize": [832, 192], "match": {"edge_margin": 7}, "distortion_focals": [200, 150]})";

    std::array<std::map<std::string, uint64_t>, 2> hashes;
    for (int run = 0; run < 2; ++run) {
        const fs::path out = tmp.path () / ("out" + std::to_string (run));
        const std::string cmd = std::string ("'") + PANOSYNTH_CLI_PATH + "' --config '" + tmp.str ("job.json") +
                                "' --seed 1234 --jobs " + std::to_string (run + 1) + " dataset '" + tmp.str ("in") +
                                "' '" + out.string () + "' >/dev/null 2>&1";
        const int status = std::system (cmd.c_str ());
        if (!WIFEXITED (status) || WEXITSTATUS (status) != 0)
            return {false, fmt ("dataset run %d exited with status %d", run + 1, status)};
        hashes[run] = tree_hashes (out);
    }
    const bool manifests = hashes[0].count ("manifest.json") &&
                           hashes[0]["manifest.json"] == hashes[1]["manifest.json"];
    const bool ok = manifests && hashes[0] == hashes[1] && hashes[0].size () > 1;
    return {ok, fmt ("%zu files per run, manifests %s, trees %s", hashes[0].size (),
                     manifests ? "identical" : "differ", hashes[0] == hashes[1] ? "identical" : "differ")};
}

}

int
main ()
{
    const std::vector<std::pair<const char *, std::function<Outcome ()>>> criteria {
        {"projection round-trip", projection_round_trip},
        {"geometry reproduction (synthetic strip)", paper_geometry},
        {"synthetic rig end-to-end", synthetic_rig},
        {"shift recovery", shift_recovery},
        {"valid band widths", band_widths},
        {"metrics oracle", metrics_oracle},
        {"class weights", class_weights},
        {"FoV split partition", fov_split},
        {"dataset determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size (); ++i) {
        Outcome o;
        try {
            o = criteria[i].second ();
        } catch (const std::exception &e) {
            o = {false, std::string ("exception: ") + e.what ()};
        }
        failed += !o.pass;
        std::printf ("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str ());
        std::fflush (stdout);
    }
    std::printf ("%d of %zu criteria passed\n", static_cast<int> (criteria.size ()) - failed, criteria.size ());
    return failed == 0 ? 0 : 1;
}
