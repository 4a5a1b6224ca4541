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

#ifndef OCCGROUND_POINT_CLOUD_HPP_
#define OCCGROUND_POINT_CLOUD_HPP_

#include <vector>

#include "occground/grid.hpp"

namespace occground {

/// Ego-frame point cloud with optional per-point semantic labels. An empty
/// `labels` vector means no labels are attached; otherwise it must be the
/// same length as `points`.
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Label> labels;

  bool has_labels() const { return !labels.empty(); }
  std::size_t size() const { return points.size(); }
};

/// Retains exactly the points whose voxel index is in bounds under `meta`,
/// preserving order and labels.
PointCloud crop_to_range(const PointCloud& pc, const GridMeta& meta);

/// Converts a point cloud to an occupancy grid. A voxel is occupied iff it
/// contains at least one in-bounds point. Labeled clouds assign each voxel
/// the majority label among its points, ties broken by the smallest class
/// id; unlabeled clouds use `fill_label` (which must be nonzero).
OccupancyGrid voxelize(const PointCloud& pc, const GridMeta& meta, Label fill_label);

}  // namespace occground

#endif  // OCCGROUND_POINT_CLOUD_HPP_
