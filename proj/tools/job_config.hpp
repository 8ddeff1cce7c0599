/*
 * job_config.hpp - JSON job configuration shared by the panosynth subcommands
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

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace panosynth::cli {

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/*
 * Every field has a default; a config file only lists what it changes.
 *
 *   {
 *     "f": 532.740352,            focal length (px)
 *     "r": null,                  cylinder radius, null = f
 *     "d": null,                  rig distance, null = region matching
 *     "order": ["left", "forward", "right", "back"],
 *     "match": {"x_c1": null, "region_width": 9, "edge_margin": 27, "spread_threshold": 4},
 *     "resize": [3328, 768],
 *     "splits": [90, 180, 360],
 *     "distortion_focals": [700, 600, 500, 400],
 *     "dedup_threshold": 1.0,
 *     "seed": 0,
 *     "ignore_classes": [14, 15],
 *     "palette": null,            path to a palette JSON, null = built-in
 *     "jobs": 1
 *   }
 */
struct JobConfig {
    double focal = 532.740352;
    std::optional<double> radius;
    std::optional<int> d;
    std::array<std::string, 4> order {"left", "forward", "right", "back"};
    std::optional<int> x_c1;
    int region_width = 9;
    int edge_margin = 27;
    int spread_threshold = 4;
    int resize_width = 3328;
    int resize_height = 768;
    std::vector<int> splits {90, 180, 360};
    std::vector<double> distortion_focals {700.0, 600.0, 500.0, 400.0};
    double dedup_threshold = 1.0;
    uint64_t seed = 0;
    std::vector<int> ignore_classes {14, 15};
    std::optional<std::string> palette;
    int jobs = 1;

    // Throws ConfigError naming the first offending field.
    void validate () const;

    // Bit c set for every ignored class.
    uint32_t ignore_mask () const noexcept;
    // Direction indices (left 0, forward 1, right 2, back 3) in placement order.
    std::array<int, 4> order_indices () const;

    std::string to_json () const;
    // Starts from the defaults; unknown keys and mistyped values throw ConfigError.
    static JobConfig from_json (const std::string &text);
    static JobConfig load (const std::string &path);
};

}
