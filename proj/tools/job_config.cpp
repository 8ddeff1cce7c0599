/*
 * job_config.cpp - JSON job configuration shared by the panosynth subcommands
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

#include "job_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace panosynth::cli {

namespace {

using nlohmann::json;

const std::array<const char *, 4> kDirectionNames {"left", "forward", "right", "back"};

void reject_unknown (const json &obj, const std::set<std::string> &known, const std::string &where)
{
    for (auto it = obj.begin (); it != obj.end (); ++it)
        if (!known.count (it.key ()))
            throw ConfigError ("unknown key '" + where + it.key () + "'");
}

template <typename T>
T get_as (const json &v, const std::string &key)
{
    try {
        return v.get<T> ();
    } catch (const json::exception &) {
        throw ConfigError ("'" + key + "' has the wrong type");
    }
}

int get_int (const json &v, const std::string &key)
{
    if (!v.is_number_integer ())
        throw ConfigError ("'" + key + "' must be an integer");
    return v.get<int> ();
}

double get_number (const json &v, const std::string &key)
{
    if (!v.is_number ())
        throw ConfigError ("'" + key + "' must be a number");
    return v.get<double> ();
}

json optional_json (const auto &v)
{
    return v ? json (*v) : json (nullptr);
}

}

void
JobConfig::validate () const
{
    if (!(focal > 0.0) || !std::isfinite (focal))
        throw ConfigError ("f must be a positive number");
    if (radius && (!(*radius > 0.0) || !std::isfinite (*radius)))
        throw ConfigError ("r must be a positive number");
    if (d && *d <= 0)
        throw ConfigError ("d must be a positive integer");
    order_indices ();
    if (x_c1 && *x_c1 < 0)
        throw ConfigError ("match.x_c1 must be >= 0");
    if (region_width < 1 || region_width % 2 == 0)
        throw ConfigError ("match.region_width must be odd and >= 1");
    if (edge_margin < 0)
        throw ConfigError ("match.edge_margin must be >= 0");
    if (spread_threshold < 0)
        throw ConfigError ("match.spread_threshold must be >= 0");
    if (resize_width < 1 || resize_height < 1)
        throw ConfigError ("resize must be at least 1x1");
    for (int fov : splits) {
        if (fov != 90 && fov != 180 && fov != 360)
            throw ConfigError ("splits may only contain 90, 180 and 360");
        if (resize_width % ((360 / fov) * 16) != 0)
            throw ConfigError ("resize width " + std::to_string (resize_width) + " cannot be split at " +
                               std::to_string (fov) + " degrees");
    }
    if (distortion_focals.empty ())
        throw ConfigError ("distortion_focals must not be empty");
    for (double f : distortion_focals)
        if (!(f > 0.0) || !std::isfinite (f))
            throw ConfigError ("distortion_focals must be positive numbers");
    if (!(dedup_threshold >= 0.0) || !std::isfinite (dedup_threshold))
        throw ConfigError ("dedup_threshold must be >= 0");
    for (int c : ignore_classes)
        if (c < 0 || c > 15)
            throw ConfigError ("ignore_classes entries must be in 0..15");
    if (jobs < 1)
        throw ConfigError ("jobs must be >= 1");
}

uint32_t
JobConfig::ignore_mask () const noexcept
{
    uint32_t m = 0;
    for (int c : ignore_classes)
        if (c >= 0 && c < 16)
            m |= 1u << c;
    return m;
}

std::array<int, 4>
JobConfig::order_indices () const
{
    std::array<int, 4> out {};
    std::set<int> seen;
    for (int k = 0; k < 4; ++k) {
        int idx = -1;
        for (int i = 0; i < 4; ++i)
            if (order[k] == kDirectionNames[i])
                idx = i;
        if (idx < 0)
            throw ConfigError ("order entry '" + order[k] + "' is not left/forward/right/back");
        out[k] = idx;
        seen.insert (idx);
    }
    if (seen.size () != 4)
        throw ConfigError ("order must name each direction once");
    return out;
}

std::string
JobConfig::to_json () const
{
    json doc = {
        {"f", focal},
        {"r", optional_json (radius)},
        {"d", optional_json (d)},
        {"order", order},
        {"match", {{"x_c1", optional_json (x_c1)}, {"region_width", region_width},
                   {"edge_margin", edge_margin}, {"spread_threshold", spread_threshold}}},
        {"resize", {resize_width, resize_height}},
        {"splits", splits},
        {"distortion_focals", distortion_focals},
        {"dedup_threshold", dedup_threshold},
        {"seed", seed},
        {"ignore_classes", ignore_classes},
        {"palette", optional_json (palette)},
        {"jobs", jobs},
    };
    return doc.dump (2) + "\n";
}

JobConfig
JobConfig::from_json (const std::string &text)
{
    json doc;
    try {
        doc = json::parse (text);
    } catch (const json::parse_error &e) {
        throw ConfigError (std::string ("config is not valid JSON: ") + e.what ());
    }
    if (!doc.is_object ())
        throw ConfigError ("config must be a JSON object");
    reject_unknown (doc, {"f", "r", "d", "order", "match", "resize", "splits", "distortion_focals",
                          "dedup_threshold", "seed", "ignore_classes", "palette", "jobs"}, "");

    JobConfig cfg;
    if (doc.contains ("f"))
        cfg.focal = get_number (doc["f"], "f");
    if (doc.contains ("r") && !doc["r"].is_null ())
        cfg.radius = get_number (doc["r"], "r");
    if (doc.contains ("d") && !doc["d"].is_null ())
        cfg.d = get_int (doc["d"], "d");
    if (doc.contains ("order")) {
        const auto names = get_as<std::vector<std::string>> (doc["order"], "order");
        if (names.size () != 4)
            throw ConfigError ("order must list four directions");
        std::copy (names.begin (), names.end (), cfg.order.begin ());
    }
    if (doc.contains ("match")) {
        const json &m = doc["match"];
        if (!m.is_object ())
            throw ConfigError ("'match' must be an object");
        reject_unknown (m, {"x_c1", "region_width", "edge_margin", "spread_threshold"}, "match.");
        if (m.contains ("x_c1") && !m["x_c1"].is_null ())
            cfg.x_c1 = get_int (m["x_c1"], "match.x_c1");
        if (m.contains ("region_width"))
            cfg.region_width = get_int (m["region_width"], "match.region_width");
        if (m.contains ("edge_margin"))
            cfg.edge_margin = get_int (m["edge_margin"], "match.edge_margin");
        if (m.contains ("spread_threshold"))
            cfg.spread_threshold = get_int (m["spread_threshold"], "match.spread_threshold");
    }
    if (doc.contains ("resize")) {
        const json &r = doc["resize"];
        if (!r.is_array () || r.size () != 2)
            throw ConfigError ("'resize' must be [width, height]");
        cfg.resize_width = get_int (r[0], "resize[0]");
        cfg.resize_height = get_int (r[1], "resize[1]");
    }
    if (doc.contains ("splits"))
        cfg.splits = get_as<std::vector<int>> (doc["splits"], "splits");
    if (doc.contains ("distortion_focals"))
        cfg.distortion_focals = get_as<std::vector<double>> (doc["distortion_focals"], "distortion_focals");
    if (doc.contains ("dedup_threshold"))
        cfg.dedup_threshold = get_number (doc["dedup_threshold"], "dedup_threshold");
    if (doc.contains ("seed")) {
        if (!doc["seed"].is_number_unsigned ())
            throw ConfigError ("'seed' must be a non-negative integer");
        cfg.seed = doc["seed"].get<uint64_t> ();
    }
    if (doc.contains ("ignore_classes"))
        cfg.ignore_classes = get_as<std::vector<int>> (doc["ignore_classes"], "ignore_classes");
    if (doc.contains ("palette") && !doc["palette"].is_null ())
        cfg.palette = get_as<std::string> (doc["palette"], "palette");
    if (doc.contains ("jobs"))
        cfg.jobs = get_int (doc["jobs"], "jobs");
    return cfg;
}

JobConfig
JobConfig::load (const std::string &path)
{
    std::ifstream in (path);
    if (!in)
        throw ConfigError ("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf ();
    return from_json (ss.str ());
}

}
