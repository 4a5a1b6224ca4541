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

#include "occground/point_cloud.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace occground {

PointCloud crop_to_range(const PointCloud& pc, const GridMeta& meta) {
  if (pc.has_labels() && pc.labels.size() != pc.points.size()) {
    throw std::invalid_argument("point labels length does not match points");
  }
  PointCloud out;
  out.points.reserve(pc.points.size());
  if (pc.has_labels()) {
    out.labels.reserve(pc.points.size());
  }
  for (std::size_t n = 0; n < pc.points.size(); ++n) {
    if (voxel_index(pc.points[n], meta).has_value()) {
      out.points.push_back(pc.points[n]);
      if (pc.has_labels()) {
        out.labels.push_back(pc.labels[n]);
      }
    }
  }
  return out;
}

OccupancyGrid voxelize(const PointCloud& pc, const GridMeta& meta, Label fill_label) {
  const bool labeled = pc.has_labels();
  if (labeled && pc.labels.size() != pc.points.size()) {
    throw std::invalid_argument("point labels length does not match points");
  }
  if (!labeled && fill_label == kFreeLabel) {
    throw std::invalid_argument("fill_label must be nonzero for unlabeled clouds");
  }

  OccupancyGrid grid(meta);
  if (!labeled) {
    for (const Vec3& p : pc.points) {
      if (const auto v = voxel_index(p, meta)) {
        grid.set(*v, fill_label);
      }
    }
    return grid;
  }

  // majority label per voxel; ties resolved toward the smallest class id
  std::vector<std::pair<std::size_t, Label>> hits;
  hits.reserve(pc.points.size());
  for (std::size_t n = 0; n < pc.points.size(); ++n) {
    if (const auto v = voxel_index(pc.points[n], meta)) {
      if (pc.labels[n] == kFreeLabel) {
        throw std::invalid_argument("per-point label 0 conflicts with the free encoding");
      }
      hits.emplace_back(meta.linear_index(v->i, v->j, v->k), pc.labels[n]);
    }
  }
  std::sort(hits.begin(), hits.end());

  std::vector<Label> labels(meta.voxel_count(), kFreeLabel);
  std::size_t begin = 0;
  while (begin < hits.size()) {
    std::size_t end = begin;
    while (end < hits.size() && hits[end].first == hits[begin].first) {
      ++end;
    }
    // hits[begin..end) share one voxel and are sorted by label
    Label best = hits[begin].second;
    std::size_t best_count = 0;
    std::size_t run_start = begin;
    for (std::size_t n = begin + 1; n <= end; ++n) {
      if (n == end || hits[n].second != hits[run_start].second) {
        const std::size_t count = n - run_start;
        if (count > best_count) {
          best_count = count;
          best = hits[run_start].second;
        }
        run_start = n;
      }
    }
    labels[hits[begin].first] = best;
    begin = end;
  }
  return OccupancyGrid(meta, std::move(labels));
}

}  // namespace occground
