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
//
// Brute-force reference implementations used only by tests. These stay
// independent of the library code paths they check: containment and center
// arithmetic are recomputed here, sets become dense bitmaps, and rays are
// intersected against every voxel's slabs instead of traversed.

#ifndef OCCGROUND_TESTS_ORACLES_HPP_
#define OCCGROUND_TESTS_ORACLES_HPP_

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "occground/depthmap.hpp"
#include "occground/grid.hpp"

namespace occground::oracles {

inline bool contains_point(const Box3D& box, const Vec3& p) {
  const double c = std::cos(-box.yaw);
  const double s = std::sin(-box.yaw);
  const double dx = p.x() - box.center.x();
  const double dy = p.y() - box.center.y();
  const double dz = p.z() - box.center.z();
  const double bx = c * dx - s * dy;
  const double by = s * dx + c * dy;
  const double eps = 1e-9;
  return std::abs(bx) <= box.size.x() / 2.0 + eps &&
         std::abs(by) <= box.size.y() / 2.0 + eps &&
         std::abs(dz) <= box.size.z() / 2.0 + eps;
}

/// Enumerates every voxel of the grid and keeps the occupied ones whose
/// independently-computed center falls inside the box.
inline VoxelSet occupancy_in_box(const OccupancyGrid& grid, const Box3D& box) {
  const GridMeta& m = grid.meta();
  std::vector<VoxelIndex> out;
  for (int i = 0; i < m.nx(); ++i) {
    for (int j = 0; j < m.ny(); ++j) {
      for (int k = 0; k < m.nz(); ++k) {
        const VoxelIndex v{i, j, k};
        if (grid.at(v) == kFreeLabel) {
          continue;
        }
        const Vec3 center(m.origin.x() + (i + 0.5) * m.voxel_size.x(),
                          m.origin.y() + (j + 0.5) * m.voxel_size.y(),
                          m.origin.z() + (k + 0.5) * m.voxel_size.z());
        if (contains_point(box, center)) {
          out.push_back(v);
        }
      }
    }
  }
  return VoxelSet(std::move(out));
}

/// IoU via dense bitmaps over the grid domain.
inline double bitmap_iou(const VoxelSet& gt, const VoxelSet& pred, const GridMeta& m) {
  std::vector<bool> a(m.voxel_count(), false);
  std::vector<bool> b(m.voxel_count(), false);
  for (const VoxelIndex& v : gt) {
    a[m.linear_index(v.i, v.j, v.k)] = true;
  }
  for (const VoxelIndex& v : pred) {
    b[m.linear_index(v.i, v.j, v.k)] = true;
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    inter += a[n] && b[n];
    uni += a[n] || b[n];
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

struct RayHitOracle {
  bool camera_voxel_occupied{false};
  bool hit{false};
  double entry{0.0};  // clamped to >= 0
  double exit{0.0};
};

/// Intersects the ray origin + t*dir against the slabs of every non-free
/// voxel and reports the smallest entry parameter within max_range.
inline RayHitOracle first_nonfree_on_ray(const OccupancyGrid& grid, const Vec3& origin,
                                         const Vec3& dir, double max_range) {
  const GridMeta& m = grid.meta();
  RayHitOracle result;
  result.entry = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m.nx(); ++i) {
    for (int j = 0; j < m.ny(); ++j) {
      for (int k = 0; k < m.nz(); ++k) {
        if (grid.at({i, j, k}) == kFreeLabel) {
          continue;
        }
        double t_in = -std::numeric_limits<double>::infinity();
        double t_out = std::numeric_limits<double>::infinity();
        bool miss = false;
        for (int a = 0; a < 3; ++a) {
          const double lo =
              m.origin[a] + (a == 0 ? i : a == 1 ? j : k) * m.voxel_size[a];
          const double hi = lo + m.voxel_size[a];
          if (dir[a] == 0.0) {
            if (origin[a] < lo || origin[a] >= hi) {
              miss = true;
              break;
            }
            continue;
          }
          double ta = (lo - origin[a]) / dir[a];
          double tb = (hi - origin[a]) / dir[a];
          if (ta > tb) {
            std::swap(ta, tb);
          }
          t_in = std::max(t_in, ta);
          t_out = std::min(t_out, tb);
        }
        if (miss || t_in > t_out || t_out < 0.0) {
          continue;
        }
        if (t_in < 0.0) {
          result.camera_voxel_occupied = true;
          continue;
        }
        if (t_in <= max_range && t_in < result.entry) {
          result.hit = true;
          result.entry = t_in;
          result.exit = t_out;
        }
      }
    }
  }
  return result;
}

inline OccupancyGrid random_grid(std::mt19937& rng, int max_dim = 32,
                                 double fill = 0.05) {
  std::uniform_int_distribution<int> dim_dist(2, max_dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> origin_dist(-8.0, 8.0);
  std::uniform_real_distribution<double> size_dist(0.3, 1.2);
  const GridMeta meta({dim_dist(rng), dim_dist(rng), dim_dist(rng)},
                      Vec3(origin_dist(rng), origin_dist(rng), origin_dist(rng)),
                      Vec3(size_dist(rng), size_dist(rng), size_dist(rng)));
  OccupancyGrid grid(meta);
  std::uniform_int_distribution<int> label_dist(1, 12);
  for (int i = 0; i < meta.nx(); ++i) {
    for (int j = 0; j < meta.ny(); ++j) {
      for (int k = 0; k < meta.nz(); ++k) {
        if (unit(rng) < fill) {
          grid.set({i, j, k}, static_cast<Label>(label_dist(rng)));
        }
      }
    }
  }
  return grid;
}

inline Box3D random_box_in(const GridMeta& meta, std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec3 extent = meta.max_corner() - meta.origin;
  const Vec3 center = meta.origin + Vec3(unit(rng) * extent.x(), unit(rng) * extent.y(),
                                         unit(rng) * extent.z());
  const Vec3 size(0.1 + unit(rng) * 0.8 * extent.x(), 0.1 + unit(rng) * 0.8 * extent.y(),
                  0.1 + unit(rng) * 0.8 * extent.z());
  std::uniform_real_distribution<double> yaw_dist(-3.14159, 3.14159);
  return Box3D(center, size, yaw_dist(rng));
}

}  // namespace occground::oracles

#endif  // OCCGROUND_TESTS_ORACLES_HPP_
