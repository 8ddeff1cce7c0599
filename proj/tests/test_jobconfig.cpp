/*
 * test_jobconfig.cpp - job configuration parsing and validation
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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "job_config.hpp"

using panosynth::cli::ConfigError;
using panosynth::cli::JobConfig;

namespace {

std::string error_of (auto &&fn)
{
    try {
        fn ();
    } catch (const ConfigError &e) {
        return e.what ();
    }
    FAIL ("expected a ConfigError");
    return {};
}

}

TEST_CASE ("defaults")
{
    const JobConfig c;
    CHECK_NOTHROW (c.validate ());
    CHECK (c.focal == 532.740352);
    CHECK_FALSE (c.d.has_value ());
    CHECK (c.region_width == 9);
    CHECK (c.edge_margin == 27);
    CHECK (c.resize_width == 3328);
    CHECK (c.resize_height == 768);
    CHECK (c.splits == std::vector<int> {90, 180, 360});
    CHECK (c.distortion_focals == std::vector<double> {700, 600, 500, 400});
    CHECK (c.ignore_mask () == ((1u << 14) | (1u << 15)));
    CHECK (c.order_indices () == std::array<int, 4> {0, 1, 2, 3});
    CHECK (JobConfig::from_json ("{}").to_json () == c.to_json ());
}

TEST_CASE ("partial configs override only what they name")
{
    const JobConfig c = JobConfig::from_json (R"({
        "f": 400, "d": 835, "order": ["back", "left", "forward", "right"],
        "match": {"region_width": 11}, "resize": [1664, 384], "seed": 18446744073709551615,
        "ignore_classes": [], "palette": "p.json", "jobs": 4})");
    CHECK (c.focal == 400.0);
    CHECK (c.d == 835);
    CHECK (c.order_indices () == std::array<int, 4> {3, 0, 1, 2});
    CHECK (c.region_width == 11);
    CHECK (c.edge_margin == 27);
    CHECK (c.resize_width == 1664);
    CHECK (c.seed == UINT64_MAX);
    CHECK (c.ignore_mask () == 0);
    CHECK (c.palette == "p.json");
    CHECK (c.jobs == 4);
    CHECK_NOTHROW (c.validate ());
}

TEST_CASE ("round trip through JSON")
{
    JobConfig c;
    c.radius = 610.5;
    c.x_c1 = 1000;
    c.splits = {180};
    c.distortion_focals = {650.0};
    c.dedup_threshold = 0.25;
    c.seed = 99;
    const JobConfig back = JobConfig::from_json (c.to_json ());
    CHECK (back.to_json () == c.to_json ());
    CHECK (back.radius == 610.5);
    CHECK (back.x_c1 == 1000);
}

TEST_CASE ("unknown keys and wrong types are rejected")
{
    CHECK (error_of ([] { JobConfig::from_json (R"({"focal": 3})"); }) == "unknown key 'focal'");
    CHECK (error_of ([] { JobConfig::from_json (R"({"match": {"width": 3}})"); }) == "unknown key 'match.width'");
    CHECK (error_of ([] { JobConfig::from_json (R"({"d": 835.5})"); }) == "'d' must be an integer");
    CHECK (error_of ([] { JobConfig::from_json (R"({"f": "big"})"); }) == "'f' must be a number");
    CHECK (error_of ([] { JobConfig::from_json (R"({"order": ["left"]})"); }) == "order must list four directions");
    CHECK (error_of ([] { JobConfig::from_json (R"({"order": "left"})"); }) == "'order' has the wrong type");
    CHECK (error_of ([] { JobConfig::from_json (R"({"resize": [3328]})"); }) == "'resize' must be [width, height]");
    CHECK (error_of ([] { JobConfig::from_json (R"({"seed": -1})"); }) == "'seed' must be a non-negative integer");
    CHECK (error_of ([] { JobConfig::from_json (R"({"match": 3})"); }) == "'match' must be an object");
    CHECK (error_of ([] { JobConfig::from_json ("[1, 2]"); }) == "config must be a JSON object");
    CHECK (error_of ([] { JobConfig::from_json ("{"); }).rfind ("config is not valid JSON", 0) == 0);
}

TEST_CASE ("validation names the offending field")
{
    auto fails = [] (auto mutate) {
        JobConfig c;
        mutate (c);
        return error_of ([&] { c.validate (); });
    };
    CHECK (fails ([] (JobConfig &c) { c.focal = 0; }) == "f must be a positive number");
    CHECK (fails ([] (JobConfig &c) { c.radius = -2; }) == "r must be a positive number");
    CHECK (fails ([] (JobConfig &c) { c.d = 0; }) == "d must be a positive integer");
    CHECK (fails ([] (JobConfig &c) { c.region_width = 8; }) == "match.region_width must be odd and >= 1");
    CHECK (fails ([] (JobConfig &c) { c.splits = {45}; }) == "splits may only contain 90, 180 and 360");
    CHECK (fails ([] (JobConfig &c) { c.resize_width = 3340; }).find ("3340") != std::string::npos);
    CHECK (fails ([] (JobConfig &c) { c.distortion_focals.clear (); }) == "distortion_focals must not be empty");
    CHECK (fails ([] (JobConfig &c) { c.ignore_classes = {16}; }) == "ignore_classes entries must be in 0..15");
    CHECK (fails ([] (JobConfig &c) { c.jobs = 0; }) == "jobs must be >= 1");
    CHECK (fails ([] (JobConfig &c) { c.order[2] = "up"; }).find ("'up'") != std::string::npos);
    CHECK (fails ([] (JobConfig &c) { c.order[2] = "left"; }) == "order must name each direction once");
}

TEST_CASE ("load reads a file")
{
    const auto path = std::filesystem::temp_directory_path () / "panosynth-jobconfig-test.json";
    std::ofstream (path) << R"({"d": 836, "jobs": 2})";
    const JobConfig c = JobConfig::load (path.string ());
    CHECK (c.d == 836);
    CHECK (c.jobs == 2);
    std::filesystem::remove (path);
    CHECK (error_of ([&] { JobConfig::load (path.string ()); }).find ("cannot read") != std::string::npos);
}
