/*
 * regmatch.hpp - distance estimation between adjacent warped views by
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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/cylproj.hpp"
#include "core/image.hpp"

namespace panosynth {

// Rectangular block of a raster: columns [x0, x0 + width), rows [y0, y0 + height).
struct RegionRect {
    int x0 = 0;
    int y0 = 0;
    int width = 0;
    int height = 0;
};

/*
 * Sum of absolute channel differences between two equally sized regions.
 * Throws DimensionMismatch for shape differences and InvalidRegion when a
 * region leaves its image or covers an invalid pixel.
 */
uint64_t discrepancy (const Raster &a, RegionRect ra, const Raster &b, RegionRect rb);

// Same metric over flat channel vectors (any depth, equal length).
uint64_t discrepancy (std::span<const uint8_t> a, std::span<const uint8_t> b);

struct RowRange {
    int first = 0;
    int last = -1; // inclusive
};

struct MatchConfig {
    int x_c1 = 0;
    int region_width = 9;
    // Unset: every row on which the reference region is fully valid in i1.
    std::optional<RowRange> region_rows;
    // Inclusive candidate interval for x_c2; unset scans every column of i2.
    std::optional<std::pair<int, int>> scan_range;

    void validate () const;
};

struct MatchPoint {
    int x_c2;
    uint64_t dv;
};

struct MatchCurve {
    int x_c1 = 0;
    RowRange rows;
    std::vector<MatchPoint> candidates; // ascending x_c2; skipped columns absent
    int best_x_c2 = 0;
    uint64_t best_dv = 0;
    // x_c1 - best_x_c2: positive when i2's view lies to the right of i1's.
    int d = 0;

    std::string to_csv () const;
};

MatchCurve scan_match (const Raster &i1, const Raster &i2, const MatchConfig &cfg);

struct RigDistance {
    int d = 0;
    std::vector<MatchCurve> curves;
    int spread = 0;
    bool calibration_warning = false;
    std::string warning;
};

// Median (lower median for even counts) of per-pair distances.
RigDistance estimate_rig_distance (const std::vector<std::pair<Raster, Raster>> &pairs,
                                   const MatchConfig &cfg, int spread_threshold = 4);

/*
 * Reference column for a warped canvas: region_width / 2 + edge_margin columns
 * inside the right edge of the valid band. With the SYNTHIA camera
 * (1280 wide, f = 532.740352) and the default margin this is column 1075.
 */
int default_reference_column (const CylindricalCamera &cam, int region_width = 9, int edge_margin = 27);

}
