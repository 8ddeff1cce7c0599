/*
 * regmatch.cpp - distance estimation between adjacent warped views by
 *                region matching
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

#include "core/regmatch.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace panosynth {

namespace {

std::string rect_str (RegionRect r)
{
    std::ostringstream s;
    s << r.width << "x" << r.height << "+" << r.x0 << "+" << r.y0;
    return s.str ();
}

void check_region (const Raster &img, RegionRect r, const char *which)
{
    if (r.width < 1 || r.height < 1 || r.x0 < 0 || r.y0 < 0 ||
            r.x0 + r.width > img.width () || r.y0 + r.height > img.height ())
        throw Error (ErrorCode::InvalidRegion,
                     std::string (which) + " region " + rect_str (r) + " leaves the image");
    for (int y = r.y0; y < r.y0 + r.height; ++y)
        for (int x = r.x0; x < r.x0 + r.width; ++x)
            if (!img.is_valid (x, y))
                throw Error (ErrorCode::InvalidRegion,
                             std::string (which) + " region " + rect_str (r) + " covers invalid pixel " +
                             std::to_string (x) + "," + std::to_string (y));
}

// Unchecked; regions already validated.
uint64_t region_sad (const Raster &a, RegionRect ra, const Raster &b, RegionRect rb) noexcept
{
    uint64_t sum = 0;
    for (int dy = 0; dy < ra.height; ++dy) {
        const uint8_t *pa = a.pixel (ra.x0, ra.y0 + dy);
        const uint8_t *pb = b.pixel (rb.x0, rb.y0 + dy);
        for (int i = 0; i < ra.width * 3; ++i)
            sum += static_cast<uint64_t> (std::abs (static_cast<int> (pa[i]) - static_cast<int> (pb[i])));
    }
    return sum;
}

}

uint64_t
discrepancy (const Raster &a, RegionRect ra, const Raster &b, RegionRect rb)
{
    if (ra.width != rb.width || ra.height != rb.height)
        throw Error (ErrorCode::DimensionMismatch,
                     "regions differ in shape: " + rect_str (ra) + " vs " + rect_str (rb));
    check_region (a, ra, "first");
    check_region (b, rb, "second");
    return region_sad (a, ra, b, rb);
}

uint64_t
discrepancy (std::span<const uint8_t> a, std::span<const uint8_t> b)
{
    if (a.size () != b.size ())
        throw Error (ErrorCode::DimensionMismatch,
                     "regions differ in size: " + std::to_string (a.size ()) + " vs " + std::to_string (b.size ()));
    uint64_t sum = 0;
    for (std::size_t i = 0; i < a.size (); ++i)
        sum += static_cast<uint64_t> (std::abs (static_cast<int> (a[i]) - static_cast<int> (b[i])));
    return sum;
}

void
MatchConfig::validate () const
{
    if (region_width < 1 || region_width % 2 == 0)
        throw Error (ErrorCode::InvalidArgument,
                     "region width must be odd and >= 1, got " + std::to_string (region_width));
    if (region_rows && region_rows->last < region_rows->first)
        throw Error (ErrorCode::InvalidArgument, "region row range is empty");
    if (scan_range && scan_range->second < scan_range->first)
        throw Error (ErrorCode::InvalidArgument, "scan range is empty");
}

std::string
MatchCurve::to_csv () const
{
    std::ostringstream s;
    s << "x_c2,dv\n";
    for (const auto &p : candidates)
        s << p.x_c2 << "," << p.dv << "\n";
    return s.str ();
}

MatchCurve
scan_match (const Raster &i1, const Raster &i2, const MatchConfig &cfg)
{
    cfg.validate ();
    if (i1.height () != i2.height ())
        throw Error (ErrorCode::DimensionMismatch,
                     "matched images differ in height: " + std::to_string (i1.height ()) + " vs " +
                     std::to_string (i2.height ()));

    const int half = cfg.region_width / 2;
    const int ref_x0 = cfg.x_c1 - half;
    if (ref_x0 < 0 || cfg.x_c1 + half >= i1.width ())
        throw Error (ErrorCode::InvalidRegion,
                     "reference column " + std::to_string (cfg.x_c1) + " +/- " + std::to_string (half) +
                     " leaves the first image");

    RowRange rows;
    if (cfg.region_rows) {
        rows = *cfg.region_rows;
    } else {
        // Longest run of rows on which the reference columns are all valid.
        int best_len = 0;
        int run_start = -1;
        for (int y = 0; y <= i1.height (); ++y) {
            bool ok = y < i1.height ();
            for (int x = ref_x0; ok && x <= cfg.x_c1 + half; ++x)
                ok = i1.is_valid (x, y);
            if (ok && run_start < 0)
                run_start = y;
            if (!ok && run_start >= 0) {
                if (y - run_start > best_len) {
                    best_len = y - run_start;
                    rows = {run_start, y - 1};
                }
                run_start = -1;
            }
        }
        if (best_len == 0)
            throw Error (ErrorCode::InvalidRegion,
                         "reference region at column " + std::to_string (cfg.x_c1) + " has no valid rows");
    }
    const RegionRect ref {ref_x0, rows.first, cfg.region_width, rows.last - rows.first + 1};
    check_region (i1, ref, "reference");

    // Columns of i2 valid over the whole row range.
    std::vector<uint8_t> column_ok (i2.width (), 1);
    for (int x = 0; x < i2.width (); ++x)
        for (int y = rows.first; y <= rows.last && column_ok[x]; ++y)
            column_ok[x] = (y < i2.height ()) && i2.is_valid (x, y);

    int lo = half;
    int hi = i2.width () - 1 - half;
    if (cfg.scan_range) {
        lo = std::max (lo, cfg.scan_range->first);
        hi = std::min (hi, cfg.scan_range->second);
    }

    MatchCurve curve;
    curve.x_c1 = cfg.x_c1;
    curve.rows = rows;
    for (int c = lo; c <= hi; ++c) {
        bool ok = true;
        for (int x = c - half; ok && x <= c + half; ++x)
            ok = column_ok[x];
        if (!ok)
            continue;
        const RegionRect cand {c - half, rows.first, cfg.region_width, ref.height};
        curve.candidates.push_back ({c, region_sad (i1, ref, i2, cand)});
    }
    if (curve.candidates.empty ())
        throw Error (ErrorCode::NoCandidates, "no fully valid candidate region inside the scan range");

    const auto best = std::min_element (curve.candidates.begin (), curve.candidates.end (),
                                        [] (const MatchPoint &a, const MatchPoint &b) {
                                            return a.dv < b.dv;
                                        });
    curve.best_x_c2 = best->x_c2;
    curve.best_dv = best->dv;
    curve.d = cfg.x_c1 - best->x_c2;
    return curve;
}

RigDistance
estimate_rig_distance (const std::vector<std::pair<Raster, Raster>> &pairs, const MatchConfig &cfg,
                       int spread_threshold)
{
    if (pairs.empty ())
        throw Error (ErrorCode::EmptyInput, "rig distance estimation needs at least one image pair");

    RigDistance out;
    std::vector<int> ds;
    for (const auto &[a, b] : pairs) {
        out.curves.push_back (scan_match (a, b, cfg));
        ds.push_back (out.curves.back ().d);
    }
    std::sort (ds.begin (), ds.end ());
    out.d = ds[(ds.size () - 1) / 2];
    out.spread = ds.back () - ds.front ();
    if (out.spread > spread_threshold) {
        out.calibration_warning = true;
        std::ostringstream s;
        s << "per-pair distances disagree by " << out.spread << " px (threshold " << spread_threshold << "):";
        for (const auto &c : out.curves)
            s << " " << c.d;
        out.warning = s.str ();
    }
    return out;
}

int
default_reference_column (const CylindricalCamera &cam, int region_width, int edge_margin)
{
    const ColumnSpan band = warped_valid_columns (cam);
    return band.last - region_width / 2 - edge_margin;
}

}
