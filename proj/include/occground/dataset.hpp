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

#ifndef OCCGROUND_DATASET_HPP_
#define OCCGROUND_DATASET_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "occground/grounding.hpp"

namespace occground {

/// One benchmark record before filtering: prompt, referred box in its
/// source frame, the rigid map from that frame to ego, and the scene
/// annotations. The scene grid is fetched by reference so a raw index never
/// has to hold every grid in memory.
struct RawSample {
  std::string sample_id;
  std::optional<std::string> prompt;
  Box3D box;  // source frame
  Label category{1};
  RigidTransform ego_from_source;
  std::string grid_ref;
  std::vector<AnnotatedBox> all_boxes;  // source frame
  std::string split{"train"};
};

enum class RejectReason {
  kCenterOutOfRange,
  kNoOccupiedVoxels,
  kMissingGrid,
  kMissingPrompt,
};
const char* reject_reason_name(RejectReason reason);

struct DatasetManifest {
  std::map<std::string, std::vector<std::string>> accepted_by_split;  // sorted ids
  std::vector<std::pair<std::string, RejectReason>> rejected;         // sorted by id
  std::map<RejectReason, std::size_t> rejection_counts;  // every reason present
  std::size_t input_count{0};

  std::size_t accepted_count() const;
  std::size_t rejected_count() const { return rejected.size(); }
};

/// Fetches the scene grid for a grid reference; nullopt means the grid is
/// missing or unreadable (the sample is rejected with reason missing_grid).
using GridLoader =
    std::function<std::optional<OccupancyGrid>(const std::string& grid_ref)>;

struct BuildOptions {
  GridMeta meta{default_grid_meta()};
  /// When true, the Unique/Multiple category count runs over the raw
  /// annotation list instead of the annotations that pass both filters.
  bool uniqueness_over_raw{false};
};

struct BuildResult {
  std::vector<GroundingSample> samples;  // accepted, sorted by sample_id
  DatasetManifest manifest;
};

/// Rewrites the referred box and scene annotations into the ego frame.
/// Throws "non-planar pose" when the transform's rotation is not a pure
/// z-rotation within 1e-6 (the yaw-only box model breaks otherwise).
RawSample to_ego_frame(const RawSample& raw);

/// True iff the box center lies within the grid's world range, boundaries
/// inclusive.
bool filter_center_range(const Box3D& box, const GridMeta& meta);

/// True iff the box contains at least one occupied voxel center.
bool filter_has_occupied(const OccupancyGrid& grid, const Box3D& box);

/// Runs the construction pipeline: ego alignment, both filters, the
/// uniqueness flag, and the manifest. Deterministic for any input order
/// (ids are sorted before processing); duplicate sample ids throw.
BuildResult build_dataset(std::vector<RawSample> raws, const GridLoader& loader,
                          const BuildOptions& options);

struct ClassStats {
  std::size_t count{0};
  double mean_voxels{0.0};
  long rounded_mean{0};  // half-up, for display
};

/// Per-class referent counts and mean ground-truth voxel counts.
std::map<Label, ClassStats> compute_statistics(
    const std::vector<GroundingSample>& samples, const GridStore& grids);

}  // namespace occground

#endif  // OCCGROUND_DATASET_HPP_
