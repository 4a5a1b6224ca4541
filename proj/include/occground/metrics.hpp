// Copyright 2026 The OccGround Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OCCGROUND_METRICS_HPP_
#define OCCGROUND_METRICS_HPP_

#include <map>
#include <string>
#include <vector>

#include "occground/grounding.hpp"

namespace occground {

enum class Subset { kUnique, kMultiple, kOverall };
const char* subset_name(Subset s);

struct EvaluationReport {
  std::vector<double> thresholds;  // ascending, deduplicated
  std::vector<std::pair<std::string, double>> per_sample;  // sorted by id
  // (subset, threshold index) -> Acc@threshold; subsets with zero samples
  // carry no entries
  std::map<std::pair<Subset, std::size_t>, double> acc;
  std::map<Subset, std::size_t> counts;
  std::vector<std::string> missing_predictions;    // samples without a prediction
  std::vector<std::string> unmatched_predictions;  // predictions without a sample
};

/// Intersection-over-union of two voxel sets. The ground-truth set must be
/// non-empty (an empty one indicates a dataset-construction bug).
double iou(const VoxelSet& gt, const VoxelSet& pred);

/// Fraction of IoUs strictly exceeding the threshold.
double acc_at(const std::vector<double>& ious, double threshold);

/// Scores predictions against ground truth derived from the samples' grids
/// and boxes, with the Unique/Multiple/Overall breakdown. A sample without
/// a prediction scores 0 and is listed in the report.
EvaluationReport evaluate(const std::vector<GroundingSample>& samples,
                          const GridStore& grids,
                          const std::vector<GroundingPrediction>& preds,
                          const std::vector<double>& thresholds);

/// Plain-text accuracy table: Unique/Multiple/Overall columns per
/// threshold, percentages with two decimals.
std::string format_report_table(const EvaluationReport& report);

}  // namespace occground

#endif  // OCCGROUND_METRICS_HPP_
