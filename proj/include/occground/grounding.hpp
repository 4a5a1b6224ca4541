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

#ifndef OCCGROUND_GROUNDING_HPP_
#define OCCGROUND_GROUNDING_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "occground/grid.hpp"

namespace occground {

/// Scene grids keyed by the grid reference stored in samples.
using GridStore = std::map<std::string, OccupancyGrid>;

struct AnnotatedBox {
  Box3D box;
  Label category{1};
};

/// One benchmark record: a language prompt referring to one annotated box
/// within a scene occupancy grid.
struct GroundingSample {
  std::string sample_id;
  std::string prompt;
  Box3D box;            // referred object, ego frame
  Label category{1};
  bool is_unique{false};
  std::string grid_ref;  // identifier of the sample's occupancy grid
  std::vector<AnnotatedBox> all_boxes;
  std::string split{"train"};
};

struct GroundingPrediction {
  std::string sample_id;
  VoxelSet voxels;
  std::optional<Box3D> pred_box;
};

/// Occupied voxels whose centers lie inside the box: the ground-truth
/// occupancy set of a referred object.
VoxelSet extract_gt_occupancy(const OccupancyGrid& grid, const Box3D& box);

/// Second-stage refinement: restrict a (predicted) occupancy grid to the
/// occupied voxels inside a (predicted) box. Same contract as
/// extract_gt_occupancy, applied to predicted inputs.
VoxelSet refine_two_stage(const OccupancyGrid& grid, const Box3D& pred_box);

/// Dense boolean occupancy mask, true exactly where the label is nonzero,
/// in the grid's lattice order.
std::vector<bool> binary_mask(const OccupancyGrid& grid);

/// Candidate pool for the random baselines' box draw.
enum class BaselineCandidates {
  kSameClass,  // boxes matching the referred category (fall back to all)
  kAllBoxes,
};

/// Random baseline: draw one scene box, then predict all voxels of that
/// box's class id inside it. Deterministic for a fixed seed.
GroundingPrediction gt_rand_baseline(const GroundingSample& sample,
                                     const OccupancyGrid& grid, std::uint64_t rng_seed,
                                     BaselineCandidates candidates =
                                         BaselineCandidates::kSameClass);

/// Random baseline: draw one same-class scene box and predict the full
/// ground-truth occupancy inside it. Deterministic for a fixed seed.
GroundingPrediction box_rand_baseline(const GroundingSample& sample,
                                      const OccupancyGrid& grid, std::uint64_t rng_seed);

/// Per-sample seed derivation: global_seed xor FNV-1a(sample_id). Keeps
/// baseline draws independent of sample processing order.
std::uint64_t baseline_seed(std::uint64_t global_seed, std::string_view sample_id);

}  // namespace occground

#endif  // OCCGROUND_GROUNDING_HPP_
