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

#include "occground/grounding.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace occground {

namespace {

struct IndexRange {
  int lo[3];
  int hi[3];  // inclusive
  bool empty{false};
};

// Lattice range of voxel centers that can possibly fall inside the box:
// the box's axis-aligned bounds, padded by the containment slack, mapped to
// center indices.
IndexRange candidate_range(const Box3D& box, const GridMeta& meta) {
  const double c = std::abs(std::cos(box.yaw));
  const double s = std::abs(std::sin(box.yaw));
  const double hx = 0.5 * (box.size.x() * c + box.size.y() * s);
  const double hy = 0.5 * (box.size.x() * s + box.size.y() * c);
  const double hz = 0.5 * box.size.z();
  const Vec3 half(hx, hy, hz);

  constexpr double kPad = 1e-8;
  IndexRange r{};
  for (int a = 0; a < 3; ++a) {
    const double lo_world = box.center[a] - half[a] - kPad;
    const double hi_world = box.center[a] + half[a] + kPad;
    // centers sit at origin + (i + 0.5) * v; clamp before the int cast so
    // extreme boxes cannot overflow
    const double lo_idx =
        std::ceil((lo_world - meta.origin[a]) / meta.voxel_size[a] - 0.5);
    const double hi_idx =
        std::floor((hi_world - meta.origin[a]) / meta.voxel_size[a] - 0.5);
    const double n = static_cast<double>(meta.dims[a]);
    r.lo[a] = static_cast<int>(std::clamp(lo_idx, 0.0, n));
    r.hi[a] = static_cast<int>(std::clamp(hi_idx, -1.0, n - 1.0));
    if (r.lo[a] > r.hi[a]) {
      r.empty = true;
    }
  }
  return r;
}

// Deterministic bounded draw (multiply-shift), independent of platform
// distribution implementations.
std::size_t bounded_pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

std::size_t pick_box(const GroundingSample& sample, std::uint64_t rng_seed,
                     bool same_class_only) {
  if (sample.all_boxes.empty()) {
    throw std::invalid_argument("sample has no scene boxes");
  }
  std::vector<std::size_t> pool;
  if (same_class_only) {
    for (std::size_t n = 0; n < sample.all_boxes.size(); ++n) {
      if (sample.all_boxes[n].category == sample.category) {
        pool.push_back(n);
      }
    }
  }
  if (pool.empty()) {
    pool.resize(sample.all_boxes.size());
    for (std::size_t n = 0; n < pool.size(); ++n) {
      pool[n] = n;
    }
  }
  std::mt19937_64 rng(rng_seed);
  return pool[bounded_pick(rng, pool.size())];
}

}  // namespace

VoxelSet extract_gt_occupancy(const OccupancyGrid& grid, const Box3D& box) {
  const GridMeta& meta = grid.meta();
  const IndexRange r = candidate_range(box, meta);
  std::vector<VoxelIndex> out;
  if (r.empty) {
    return VoxelSet();
  }
  for (int i = r.lo[0]; i <= r.hi[0]; ++i) {
    for (int j = r.lo[1]; j <= r.hi[1]; ++j) {
      for (int k = r.lo[2]; k <= r.hi[2]; ++k) {
        const VoxelIndex v{i, j, k};
        if (grid.at(v) != kFreeLabel && box_contains(box, voxel_center(v, meta))) {
          out.push_back(v);
        }
      }
    }
  }
  return VoxelSet(std::move(out));
}

VoxelSet refine_two_stage(const OccupancyGrid& grid, const Box3D& pred_box) {
  return extract_gt_occupancy(grid, pred_box);
}

std::vector<bool> binary_mask(const OccupancyGrid& grid) {
  std::vector<bool> mask(grid.labels().size());
  for (std::size_t n = 0; n < mask.size(); ++n) {
    mask[n] = grid.labels()[n] != kFreeLabel;
  }
  return mask;
}

GroundingPrediction gt_rand_baseline(const GroundingSample& sample,
                                     const OccupancyGrid& grid, std::uint64_t rng_seed,
                                     BaselineCandidates candidates) {
  const bool same_class = candidates == BaselineCandidates::kSameClass;
  const AnnotatedBox& chosen = sample.all_boxes[pick_box(sample, rng_seed, same_class)];

  // voxels of the chosen box's class id inside it
  const GridMeta& meta = grid.meta();
  const IndexRange r = candidate_range(chosen.box, meta);
  std::vector<VoxelIndex> out;
  if (!r.empty) {
    for (int i = r.lo[0]; i <= r.hi[0]; ++i) {
      for (int j = r.lo[1]; j <= r.hi[1]; ++j) {
        for (int k = r.lo[2]; k <= r.hi[2]; ++k) {
          const VoxelIndex v{i, j, k};
          if (grid.at(v) == chosen.category &&
              box_contains(chosen.box, voxel_center(v, meta))) {
            out.push_back(v);
          }
        }
      }
    }
  }
  return GroundingPrediction{sample.sample_id, VoxelSet(std::move(out)), chosen.box};
}

GroundingPrediction box_rand_baseline(const GroundingSample& sample,
                                      const OccupancyGrid& grid, std::uint64_t rng_seed) {
  const AnnotatedBox& chosen =
      sample.all_boxes[pick_box(sample, rng_seed, /*same_class_only=*/true)];
  return GroundingPrediction{sample.sample_id, extract_gt_occupancy(grid, chosen.box),
                             chosen.box};
}

std::uint64_t baseline_seed(std::uint64_t global_seed, std::string_view sample_id) {
  std::uint64_t h = 14695981039346656037ULL;  // FNV-1a 64-bit
  for (const char ch : sample_id) {
    h ^= static_cast<std::uint8_t>(ch);
    h *= 1099511628211ULL;
  }
  return global_seed ^ h;
}

}  // namespace occground
