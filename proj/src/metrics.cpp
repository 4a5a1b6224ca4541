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

#include "occground/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace occground {

const char* subset_name(Subset s) {
  switch (s) {
    case Subset::kUnique:
      return "unique";
    case Subset::kMultiple:
      return "multiple";
    case Subset::kOverall:
      return "overall";
  }
  return "?";
}

double iou(const VoxelSet& gt, const VoxelSet& pred) {
  if (gt.empty()) {
    throw std::invalid_argument("empty ground truth set");
  }
  const std::size_t inter = VoxelSet::intersection_size(gt, pred);
  const std::size_t uni = gt.size() + pred.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double acc_at(const std::vector<double>& ious, double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("threshold must be in [0, 1)");
  }
  if (ious.empty()) {
    throw std::invalid_argument("no samples");
  }
  std::size_t hits = 0;
  for (const double v : ious) {
    if (v > threshold) {  // strict
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(ious.size());
}

EvaluationReport evaluate(const std::vector<GroundingSample>& samples,
                          const GridStore& grids,
                          const std::vector<GroundingPrediction>& preds,
                          const std::vector<double>& thresholds) {
  EvaluationReport report;
  report.thresholds = thresholds;
  std::sort(report.thresholds.begin(), report.thresholds.end());
  report.thresholds.erase(
      std::unique(report.thresholds.begin(), report.thresholds.end()),
      report.thresholds.end());

  std::map<std::string, const GroundingPrediction*> pred_by_id;
  for (const auto& p : preds) {
    if (!pred_by_id.emplace(p.sample_id, &p).second) {
      throw std::invalid_argument("duplicate prediction for sample " + p.sample_id);
    }
  }

  std::set<std::string> sample_ids;
  std::vector<double> unique_ious;
  std::vector<double> multiple_ious;
  std::vector<double> all_ious;

  std::vector<const GroundingSample*> ordered;
  ordered.reserve(samples.size());
  for (const auto& s : samples) {
    ordered.push_back(&s);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->sample_id < b->sample_id; });

  for (const GroundingSample* s : ordered) {
    sample_ids.insert(s->sample_id);
    const auto grid_it = grids.find(s->grid_ref);
    if (grid_it == grids.end()) {
      throw std::invalid_argument("no grid for reference " + s->grid_ref);
    }
    const VoxelSet gt = extract_gt_occupancy(grid_it->second, s->box);

    double sample_iou = 0.0;
    const auto pred_it = pred_by_id.find(s->sample_id);
    if (pred_it == pred_by_id.end()) {
      report.missing_predictions.push_back(s->sample_id);
    } else {
      sample_iou = iou(gt, pred_it->second->voxels);
    }
    report.per_sample.emplace_back(s->sample_id, sample_iou);
    (s->is_unique ? unique_ious : multiple_ious).push_back(sample_iou);
    all_ious.push_back(sample_iou);
  }

  for (const auto& [id, pred] : pred_by_id) {
    if (!sample_ids.count(id)) {
      report.unmatched_predictions.push_back(id);
    }
  }

  report.counts[Subset::kUnique] = unique_ious.size();
  report.counts[Subset::kMultiple] = multiple_ious.size();
  report.counts[Subset::kOverall] = all_ious.size();

  const auto fill = [&](Subset subset, const std::vector<double>& ious) {
    if (ious.empty()) {
      return;
    }
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
      report.acc[{subset, t}] = acc_at(ious, report.thresholds[t]);
    }
  };
  fill(Subset::kUnique, unique_ious);
  fill(Subset::kMultiple, multiple_ious);
  fill(Subset::kOverall, all_ious);
  return report;
}

std::string format_report_table(const EvaluationReport& report) {
  // grouped columns Unique / Multiple / Overall, one Acc@threshold column
  // each, and a single result row
  constexpr int kCol = 13;
  const Subset subsets[] = {Subset::kUnique, Subset::kMultiple, Subset::kOverall};
  const auto group_width = static_cast<int>(kCol * report.thresholds.size());

  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-8s", "");
  out << buf;
  for (const Subset subset : subsets) {
    std::string title = subset_name(subset);
    title[0] = static_cast<char>(std::toupper(title[0]));
    std::snprintf(buf, sizeof(buf), "%*s", group_width, title.c_str());
    out << buf;
  }
  out << '\n';

  std::snprintf(buf, sizeof(buf), "%-8s", "");
  out << buf;
  for (std::size_t s = 0; s < 3; ++s) {
    for (const double t : report.thresholds) {
      char head[32];
      std::snprintf(head, sizeof(head), "Acc@%g(%%)", t);
      std::snprintf(buf, sizeof(buf), "%*s", kCol, head);
      out << buf;
    }
  }
  out << '\n';

  std::snprintf(buf, sizeof(buf), "%-8s", "result");
  out << buf;
  for (const Subset subset : subsets) {
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
      const auto it = report.acc.find({subset, t});
      if (it == report.acc.end()) {
        std::snprintf(buf, sizeof(buf), "%*s", kCol, "n/a");
      } else {
        std::snprintf(buf, sizeof(buf), "%*.2f", kCol, 100.0 * it->second);
      }
      out << buf;
    }
  }
  out << '\n';

  out << "counts:";
  for (const Subset subset : subsets) {
    const std::size_t count =
        report.counts.count(subset) ? report.counts.at(subset) : 0;
    out << ' ' << subset_name(subset) << '=' << count;
  }
  out << '\n';
  return out.str();
}

}  // namespace occground
