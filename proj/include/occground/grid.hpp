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

#ifndef OCCGROUND_GRID_HPP_
#define OCCGROUND_GRID_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "occground/geometry.hpp"

namespace occground {

/// Semantic voxel label. 0 is the canonical "free" label; any nonzero value
/// is a class id.
using Label = std::uint8_t;
constexpr Label kFreeLabel = 0;

/// Geometry of a regular voxel lattice: integer dimensions, the world
/// position of the minimum corner, and the metric edge lengths of one cell.
struct GridMeta {
  std::array<int, 3> dims{1, 1, 1};
  Vec3 origin{Vec3::Zero()};
  Vec3 voxel_size{Vec3::Ones()};

  GridMeta() = default;
  GridMeta(std::array<int, 3> dims_, const Vec3& origin_, const Vec3& voxel_size_);

  int nx() const { return dims[0]; }
  int ny() const { return dims[1]; }
  int nz() const { return dims[2]; }
  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
  }
  /// x-major -> y -> z lexicographic dense layout.
  std::size_t linear_index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(dims[1]) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(dims[2]) +
           static_cast<std::size_t>(k);
  }
  Vec3 max_corner() const {
    return origin + Vec3(dims[0] * voxel_size.x(), dims[1] * voxel_size.y(),
                         dims[2] * voxel_size.z());
  }

  bool operator==(const GridMeta& rhs) const {
    return dims == rhs.dims && origin == rhs.origin && voxel_size == rhs.voxel_size;
  }
};

/// The 200x200x16 lattice at 0.4 m resolution covering x,y in [-40, 40] m
/// and z in [-1, 5.4] m, used as the default everywhere.
GridMeta default_grid_meta();

struct VoxelIndex {
  int i{0};
  int j{0};
  int k{0};

  auto operator<=>(const VoxelIndex&) const = default;
};

/// Maps an ego-frame point to its voxel index, or nullopt when the point is
/// outside the lattice. Cell membership is half-open: a point exactly on a
/// cell's max face belongs to the next cell, and a point exactly on the
/// grid's max corner is out of bounds.
std::optional<VoxelIndex> voxel_index(const Vec3& p, const GridMeta& meta);

/// World position of the voxel's center. Throws std::out_of_range for an
/// index outside the lattice.
Vec3 voxel_center(const VoxelIndex& v, const GridMeta& meta);

/// A deduplicated set of voxel indices kept in ascending (i, j, k) order.
/// Equality is order-insensitive by construction.
class VoxelSet {
 public:
  VoxelSet() = default;
  explicit VoxelSet(std::vector<VoxelIndex> voxels);

  void insert(const VoxelIndex& v);
  bool contains(const VoxelIndex& v) const;

  std::size_t size() const { return voxels_.size(); }
  bool empty() const { return voxels_.empty(); }
  auto begin() const { return voxels_.begin(); }
  auto end() const { return voxels_.end(); }
  const std::vector<VoxelIndex>& indices() const { return voxels_; }

  bool operator==(const VoxelSet&) const = default;

  static std::size_t intersection_size(const VoxelSet& a, const VoxelSet& b);

 private:
  std::vector<VoxelIndex> voxels_;  // sorted, unique
};

/// Dense semantic occupancy lattice. Label 0 means free.
class OccupancyGrid {
 public:
  OccupancyGrid() : labels_(1, kFreeLabel) {}
  explicit OccupancyGrid(const GridMeta& meta)
      : meta_(meta), labels_(meta.voxel_count(), kFreeLabel) {}
  OccupancyGrid(const GridMeta& meta, std::vector<Label> labels);

  const GridMeta& meta() const { return meta_; }
  const std::vector<Label>& labels() const { return labels_; }

  bool in_bounds(const VoxelIndex& v) const {
    return v.i >= 0 && v.i < meta_.dims[0] && v.j >= 0 && v.j < meta_.dims[1] &&
           v.k >= 0 && v.k < meta_.dims[2];
  }
  Label at(const VoxelIndex& v) const {
    return labels_[meta_.linear_index(v.i, v.j, v.k)];
  }
  void set(const VoxelIndex& v, Label label) {
    labels_[meta_.linear_index(v.i, v.j, v.k)] = label;
  }

  /// All voxels with a nonzero label, in lattice order.
  VoxelSet occupied_voxels() const;

  bool operator==(const OccupancyGrid& rhs) const {
    return meta_ == rhs.meta_ && labels_ == rhs.labels_;
  }

 private:
  GridMeta meta_;
  std::vector<Label> labels_;
};

}  // namespace occground

#endif  // OCCGROUND_GRID_HPP_
