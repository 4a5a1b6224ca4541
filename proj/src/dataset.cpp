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

#include "occground/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace occground {

namespace {
constexpr double kPlanarTol = 1e-6;

Box3D transform_box(const Box3D& box, const RigidTransform& t, double yaw_delta) {
  return Box3D(t.apply(box.center), box.size, box.yaw + yaw_delta);
}
}  // namespace

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::kCenterOutOfRange:
      return "center_out_of_range";
    case RejectReason::kNoOccupiedVoxels:
      return "no_occupied_voxels";
    case RejectReason::kMissingGrid:
      return "missing_grid";
    case RejectReason::kMissingPrompt:
      return "missing_prompt";
  }
  return "?";
}

std::size_t DatasetManifest::accepted_count() const {
  std::size_t total = 0;
  for (const auto& [split, ids] : accepted_by_split) {
    total += ids.size();
  }
  return total;
}

RawSample to_ego_frame(const RawSample& raw) {
  const Mat3 r = raw.ego_from_source.rotation();
  if (std::abs(r(0, 2)) > kPlanarTol || std::abs(r(1, 2)) > kPlanarTol ||
      std::abs(r(2, 0)) > kPlanarTol || std::abs(r(2, 1)) > kPlanarTol ||
      std::abs(r(2, 2) - 1.0) > kPlanarTol) {
    throw std::invalid_argument("non-planar pose for sample " + raw.sample_id);
  }
  const double yaw_delta = std::atan2(r(1, 0), r(0, 0));

  RawSample out = raw;
  out.box = transform_box(raw.box, raw.ego_from_source, yaw_delta);
  for (auto& ab : out.all_boxes) {
    ab.box = transform_box(ab.box, raw.ego_from_source, yaw_delta);
  }
  out.ego_from_source = RigidTransform();
  return out;
}

bool filter_center_range(const Box3D& box, const GridMeta& meta) {
  const Vec3 max = meta.max_corner();
  for (int a = 0; a < 3; ++a) {
    if (box.center[a] < meta.origin[a] || box.center[a] > max[a]) {
      return false;
    }
  }
  return true;
}

bool filter_has_occupied(const OccupancyGrid& grid, const Box3D& box) {
  return !extract_gt_occupancy(grid, box).empty();
}

BuildResult build_dataset(std::vector<RawSample> raws, const GridLoader& loader,
                          const BuildOptions& options) {
  std::sort(raws.begin(), raws.end(),
            [](const RawSample& a, const RawSample& b) { return a.sample_id < b.sample_id; });
  for (std::size_t n = 1; n < raws.size(); ++n) {
    if (raws[n].sample_id == raws[n - 1].sample_id) {
      throw std::invalid_argument("duplicate sample_id " + raws[n].sample_id);
    }
  }

  BuildResult result;
  result.manifest.input_count = raws.size();
  for (const RejectReason reason :
       {RejectReason::kCenterOutOfRange, RejectReason::kNoOccupiedVoxels,
        RejectReason::kMissingGrid, RejectReason::kMissingPrompt}) {
    result.manifest.rejection_counts[reason] = 0;
  }

  const auto reject = [&](const std::string& id, RejectReason reason) {
    result.manifest.rejected.emplace_back(id, reason);
    ++result.manifest.rejection_counts[reason];
  };

  for (const RawSample& raw : raws) {
    if (!raw.prompt.has_value() || raw.prompt->empty()) {
      reject(raw.sample_id, RejectReason::kMissingPrompt);
      continue;
    }
    const RawSample ego = to_ego_frame(raw);
    if (!filter_center_range(ego.box, options.meta)) {
      reject(raw.sample_id, RejectReason::kCenterOutOfRange);
      continue;
    }
    const std::optional<OccupancyGrid> grid = loader(ego.grid_ref);
    if (!grid.has_value()) {
      reject(raw.sample_id, RejectReason::kMissingGrid);
      continue;
    }
    if (!filter_has_occupied(*grid, ego.box)) {
      reject(raw.sample_id, RejectReason::kNoOccupiedVoxels);
      continue;
    }

    std::size_t same_category = 0;
    for (const AnnotatedBox& ab : ego.all_boxes) {
      if (ab.category != ego.category) {
        continue;
      }
      if (options.uniqueness_over_raw ||
          (filter_center_range(ab.box, options.meta) &&
           filter_has_occupied(*grid, ab.box))) {
        ++same_category;
      }
    }

    GroundingSample sample;
    sample.sample_id = ego.sample_id;
    sample.prompt = *ego.prompt;
    sample.box = ego.box;
    sample.category = ego.category;
    sample.is_unique = same_category <= 1;
    sample.grid_ref = ego.grid_ref;
    sample.all_boxes = ego.all_boxes;
    sample.split = ego.split;
    result.manifest.accepted_by_split[sample.split].push_back(sample.sample_id);
    result.samples.push_back(std::move(sample));
  }
  return result;
}

std::map<Label, ClassStats> compute_statistics(
    const std::vector<GroundingSample>& samples, const GridStore& grids) {
  std::map<Label, std::pair<std::size_t, std::size_t>> sums;  // count, voxel sum
  for (const GroundingSample& s : samples) {
    const auto it = grids.find(s.grid_ref);
    if (it == grids.end()) {
      throw std::invalid_argument("no grid for reference " + s.grid_ref);
    }
    const std::size_t voxels = extract_gt_occupancy(it->second, s.box).size();
    auto& [count, sum] = sums[s.category];
    ++count;
    sum += voxels;
  }

  std::map<Label, ClassStats> out;
  for (const auto& [category, cs] : sums) {
    ClassStats stats;
    stats.count = cs.first;
    stats.mean_voxels = static_cast<double>(cs.second) / static_cast<double>(cs.first);
    stats.rounded_mean = static_cast<long>(std::floor(stats.mean_voxels + 0.5));
    out[category] = stats;
  }
  return out;
}

}  // namespace occground
