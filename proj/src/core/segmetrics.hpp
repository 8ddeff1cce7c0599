/*
 * segmetrics.hpp - confusion matrix, accuracy, IoU and median-frequency
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

#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string>

#include "core/image.hpp"

namespace panosynth {

using ClassSet = std::bitset<kClassCount>;

// Classes 14 and 15 of the default palette.
ClassSet default_ignore_set ();

// Rows: ground truth, columns: prediction.
struct ConfusionMatrix {
    std::array<std::array<uint64_t, kClassCount>, kClassCount> counts {};
    uint64_t ignored = 0;

    uint64_t total () const noexcept;
    ConfusionMatrix &merge (const ConfusionMatrix &other) noexcept;

    friend bool operator== (const ConfusionMatrix &, const ConfusionMatrix &) = default;
};

// Pixels whose ground truth is in `ignore`, or that are invalid in either map,
// only bump `ignored`.
void accumulate (ConfusionMatrix &cm, const LabelMap &gt, const LabelMap &pred, const ClassSet &ignore = {});

// trace / total; throws EmptyInput when nothing was counted.
double pixel_accuracy (const ConfusionMatrix &cm);

struct PerClassAccuracy {
    std::array<std::optional<double>, kClassCount> per_class; // nullopt: no ground-truth pixels
    double mean = 0.0;                                         // over defined classes
};
PerClassAccuracy per_class_accuracy (const ConfusionMatrix &cm);

struct IouResult {
    // nullopt when the class is absent from both ground truth and prediction.
    std::array<std::optional<double>, kClassCount> per_class;
    double mean = 0.0;
};
IouResult miou (const ConfusionMatrix &cm);

struct ClassWeights {
    std::array<double, kClassCount> weights {};
    std::array<uint64_t, kClassCount> pixel_counts {};
    ClassSet zero_count; // flagged classes (weight 0)
    double median = 0.0;
};

// Median-frequency balancing: weight_c = median(nonzero counts) / count_c.
// Invalid pixels are not counted.
class ClassCounter
{
public:
    void add (const LabelMap &labels);
    void add_counts (const std::array<uint64_t, kClassCount> &counts);
    ClassWeights weights () const;

    const std::array<uint64_t, kClassCount> &counts () const noexcept {
        return _counts;
    }

private:
    std::array<uint64_t, kClassCount> _counts {};
    std::size_t _maps = 0;
};

ClassWeights class_weights_from_counts (const std::array<uint64_t, kClassCount> &counts);

std::string evaluation_report_json (const ConfusionMatrix &cm, const Palette &palette);
std::string evaluation_report_csv (const ConfusionMatrix &cm, const Palette &palette);
std::string class_weights_json (const ClassWeights &w, const Palette &palette);

}
