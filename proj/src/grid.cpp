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

#include "occground/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace occground {

GridMeta::GridMeta(std::array<int, 3> dims_, const Vec3& origin_, const Vec3& voxel_size_)
    : dims(dims_), origin(origin_), voxel_size(voxel_size_) {
  for (int d : dims) {
    if (d < 1) {
      throw std::invalid_argument("grid dims must be >= 1");
    }
  }
  if (!(voxel_size.x() > 0.0 && voxel_size.y() > 0.0 && voxel_size.z() > 0.0)) {
    throw std::invalid_argument("voxel size must be positive");
  }
  if (!origin.allFinite() || !voxel_size.allFinite() || !max_corner().allFinite()) {
    throw std::invalid_argument("grid extent is not finite");
  }
}

GridMeta default_grid_meta() {
  return GridMeta({200, 200, 16}, Vec3(-40.0, -40.0, -1.0), Vec3(0.4, 0.4, 0.4));
}

namespace {

// floor((p - origin) / size) settled against the multiplied-out cell faces,
// so that points exactly on a representable boundary land deterministically
// in the upper cell regardless of how the quotient rounded.
std::int64_t cell_coord(double p, double origin, double size) {
  const double q = (p - origin) / size;
  if (!std::isfinite(q) || std::abs(q) > 4e18) {
    return std::numeric_limits<std::int64_t>::min();
  }
  auto i = static_cast<std::int64_t>(std::floor(q));
  while (p < origin + static_cast<double>(i) * size) {
    --i;
  }
  while (p >= origin + static_cast<double>(i + 1) * size) {
    ++i;
  }
  return i;
}

}  // namespace

std::optional<VoxelIndex> voxel_index(const Vec3& p, const GridMeta& meta) {
  VoxelIndex out;
  int* idx[3] = {&out.i, &out.j, &out.k};
  for (int a = 0; a < 3; ++a) {
    const std::int64_t c = cell_coord(p[a], meta.origin[a], meta.voxel_size[a]);
    if (c < 0 || c >= meta.dims[a]) {
      return std::nullopt;
    }
    *idx[a] = static_cast<int>(c);
  }
  return out;
}

Vec3 voxel_center(const VoxelIndex& v, const GridMeta& meta) {
  if (v.i < 0 || v.i >= meta.dims[0] || v.j < 0 || v.j >= meta.dims[1] || v.k < 0 ||
      v.k >= meta.dims[2]) {
    throw std::out_of_range("voxel index out of bounds");
  }
  return meta.origin + Vec3((v.i + 0.5) * meta.voxel_size.x(),
                            (v.j + 0.5) * meta.voxel_size.y(),
                            (v.k + 0.5) * meta.voxel_size.z());
}

VoxelSet::VoxelSet(std::vector<VoxelIndex> voxels) : voxels_(std::move(voxels)) {
  std::sort(voxels_.begin(), voxels_.end());
  voxels_.erase(std::unique(voxels_.begin(), voxels_.end()), voxels_.end());
}

void VoxelSet::insert(const VoxelIndex& v) {
  const auto it = std::lower_bound(voxels_.begin(), voxels_.end(), v);
  if (it == voxels_.end() || *it != v) {
    voxels_.insert(it, v);
  }
}

bool VoxelSet::contains(const VoxelIndex& v) const {
  return std::binary_search(voxels_.begin(), voxels_.end(), v);
}

std::size_t VoxelSet::intersection_size(const VoxelSet& a, const VoxelSet& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

OccupancyGrid::OccupancyGrid(const GridMeta& meta, std::vector<Label> labels)
    : meta_(meta), labels_(std::move(labels)) {
  if (labels_.size() != meta_.voxel_count()) {
    throw std::invalid_argument("label array length does not match grid dims");
  }
}

VoxelSet OccupancyGrid::occupied_voxels() const {
  std::vector<VoxelIndex> out;
  std::size_t lin = 0;
  for (int i = 0; i < meta_.dims[0]; ++i) {
    for (int j = 0; j < meta_.dims[1]; ++j) {
      for (int k = 0; k < meta_.dims[2]; ++k, ++lin) {
        if (labels_[lin] != kFreeLabel) {
          out.push_back({i, j, k});
        }
      }
    }
  }
  // already in ascending lattice order
  return VoxelSet(std::move(out));
}

}  // namespace occground
