/*
 * segmetrics.cpp - confusion matrix, accuracy, IoU and median-frequency
 *                  class weights
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

#include "core/segmetrics.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace panosynth {

namespace {

void require_counts (const ConfusionMatrix &cm)
{
    if (cm.total () == 0)
        throw Error (ErrorCode::EmptyInput, "confusion matrix has no counted pixels");
}

uint64_t row_sum (const ConfusionMatrix &cm, int c) noexcept
{
    uint64_t s = 0;
    for (int p = 0; p < kClassCount; ++p)
        s += cm.counts[c][p];
    return s;
}

uint64_t column_sum (const ConfusionMatrix &cm, int c) noexcept
{
    uint64_t s = 0;
    for (int g = 0; g < kClassCount; ++g)
        s += cm.counts[g][c];
    return s;
}

nlohmann::json optional_number (const std::optional<double> &v)
{
    return v ? nlohmann::json (*v) : nlohmann::json (nullptr);
}

}

ClassSet
default_ignore_set ()
{
    ClassSet s;
    s.set (14);
    s.set (15);
    return s;
}

uint64_t
ConfusionMatrix::total () const noexcept
{
    uint64_t s = 0;
    for (const auto &row : counts)
        for (uint64_t v : row)
            s += v;
    return s;
}

ConfusionMatrix &
ConfusionMatrix::merge (const ConfusionMatrix &other) noexcept
{
    for (int g = 0; g < kClassCount; ++g)
        for (int p = 0; p < kClassCount; ++p)
            counts[g][p] += other.counts[g][p];
    ignored += other.ignored;
    return *this;
}

void
accumulate (ConfusionMatrix &cm, const LabelMap &gt, const LabelMap &pred, const ClassSet &ignore)
{
    if (gt.width () != pred.width () || gt.height () != pred.height ())
        throw Error (ErrorCode::DimensionMismatch,
                     "ground truth is " + std::to_string (gt.width ()) + "x" + std::to_string (gt.height ()) +
                     ", prediction is " + std::to_string (pred.width ()) + "x" + std::to_string (pred.height ()));
    const auto g = gt.data ();
    const auto p = pred.data ();
    const auto gv = gt.valid_mask ();
    const auto pv = pred.valid_mask ();
    for (std::size_t i = 0; i < g.size (); ++i) {
        if (!gv[i] || !pv[i] || ignore.test (g[i])) {
            ++cm.ignored;
            continue;
        }
        ++cm.counts[g[i]][p[i]];
    }
}

double
pixel_accuracy (const ConfusionMatrix &cm)
{
    require_counts (cm);
    uint64_t trace = 0;
    for (int c = 0; c < kClassCount; ++c)
        trace += cm.counts[c][c];
    return static_cast<double> (trace) / static_cast<double> (cm.total ());
}

PerClassAccuracy
per_class_accuracy (const ConfusionMatrix &cm)
{
    require_counts (cm);
    PerClassAccuracy out;
    double sum = 0.0;
    int defined = 0;
    for (int c = 0; c < kClassCount; ++c) {
        const uint64_t row = row_sum (cm, c);
        if (row == 0)
            continue;
        out.per_class[c] = static_cast<double> (cm.counts[c][c]) / static_cast<double> (row);
        sum += *out.per_class[c];
        ++defined;
    }
    out.mean = defined ? sum / defined : 0.0;
    return out;
}

IouResult
miou (const ConfusionMatrix &cm)
{
    require_counts (cm);
    IouResult out;
    double sum = 0.0;
    int defined = 0;
    for (int c = 0; c < kClassCount; ++c) {
        const uint64_t tp = cm.counts[c][c];
        const uint64_t uni = row_sum (cm, c) + column_sum (cm, c) - tp;
        if (uni == 0)
            continue;
        out.per_class[c] = static_cast<double> (tp) / static_cast<double> (uni);
        sum += *out.per_class[c];
        ++defined;
    }
    out.mean = sum / defined;
    return out;
}

void
ClassCounter::add (const LabelMap &labels)
{
    const auto cls = labels.data ();
    const auto valid = labels.valid_mask ();
    for (std::size_t i = 0; i < cls.size (); ++i)
        if (valid[i])
            ++_counts[cls[i]];
    ++_maps;
}

void
ClassCounter::add_counts (const std::array<uint64_t, kClassCount> &counts)
{
    for (int c = 0; c < kClassCount; ++c)
        _counts[c] += counts[c];
    ++_maps;
}

ClassWeights
ClassCounter::weights () const
{
    if (_maps == 0)
        throw Error (ErrorCode::EmptyInput, "class weights need at least one label map");
    return class_weights_from_counts (_counts);
}

ClassWeights
class_weights_from_counts (const std::array<uint64_t, kClassCount> &counts)
{
    std::vector<uint64_t> nonzero;
    for (uint64_t c : counts)
        if (c > 0)
            nonzero.push_back (c);
    if (nonzero.empty ())
        throw Error (ErrorCode::EmptyInput, "no labelled pixels to derive class weights from");

    std::sort (nonzero.begin (), nonzero.end ());
    const std::size_t n = nonzero.size ();
    const double median = n % 2 ? static_cast<double> (nonzero[n / 2])
                                : (static_cast<double> (nonzero[n / 2 - 1]) + static_cast<double> (nonzero[n / 2])) / 2.0;

    ClassWeights w;
    w.pixel_counts = counts;
    w.median = median;
    for (int c = 0; c < kClassCount; ++c) {
        if (counts[c] == 0) {
            w.zero_count.set (c);
            continue;
        }
        w.weights[c] = median / static_cast<double> (counts[c]);
    }
    return w;
}

std::string
evaluation_report_json (const ConfusionMatrix &cm, const Palette &palette)
{
    const IouResult iou = miou (cm);
    const PerClassAccuracy acc = per_class_accuracy (cm);
    nlohmann::json per_class = nlohmann::json::array ();
    for (int c = 0; c < kClassCount; ++c) {
        per_class.push_back ({
            {"index", c},
            {"name", palette[c].name},
            {"iou", optional_number (iou.per_class[c])},
            {"accuracy", optional_number (acc.per_class[c])},
            {"gt_pixels", row_sum (cm, c)},
            {"pred_pixels", column_sum (cm, c)},
        });
    }
    nlohmann::json doc = {
        {"overall_accuracy", pixel_accuracy (cm)},
        {"mean_class_accuracy", acc.mean},
        {"miou", iou.mean},
        {"counted_pixels", cm.total ()},
        {"ignored_pixels", cm.ignored},
        {"per_class", per_class},
    };
    return doc.dump (2) + "\n";
}

std::string
evaluation_report_csv (const ConfusionMatrix &cm, const Palette &palette)
{
    const IouResult iou = miou (cm);
    const PerClassAccuracy acc = per_class_accuracy (cm);
    std::ostringstream s;
    s.precision (10);
    s << "index,name,iou,accuracy,gt_pixels,pred_pixels\n";
    for (int c = 0; c < kClassCount; ++c) {
        s << c << "," << palette[c].name << ",";
        if (iou.per_class[c])
            s << *iou.per_class[c];
        s << ",";
        if (acc.per_class[c])
            s << *acc.per_class[c];
        s << "," << row_sum (cm, c) << "," << column_sum (cm, c) << "\n";
    }
    return s.str ();
}

std::string
class_weights_json (const ClassWeights &w, const Palette &palette)
{
    nlohmann::json classes = nlohmann::json::array ();
    for (int c = 0; c < kClassCount; ++c)
        classes.push_back ({
            {"index", c},
            {"name", palette[c].name},
            {"pixels", w.pixel_counts[c]},
            {"weight", w.weights[c]},
            {"zero_count", w.zero_count.test (c)},
        });
    nlohmann::json doc = {{"median", w.median}, {"weights", w.weights}, {"classes", classes}};
    return doc.dump (2) + "\n";
}

}
