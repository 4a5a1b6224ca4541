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

#ifndef OCCGROUND_DEPTHMAP_HPP_
#define OCCGROUND_DEPTHMAP_HPP_

#include <utility>
#include <vector>

#include "occground/grid.hpp"
#include "occground/point_cloud.hpp"

namespace occground {

/// Pinhole camera: intrinsics with fx, fy > 0 and bottom row (0, 0, 1),
/// plus the rigid camera-to-ego pose. Constructing with a non-invertible K
/// throws.
class CameraModel {
 public:
  CameraModel(const Mat3& intrinsics, const RigidTransform& camera_to_ego, int width,
              int height);

  const Mat3& intrinsics() const { return k_; }
  const RigidTransform& camera_to_ego() const { return camera_to_ego_; }
  int width() const { return width_; }
  int height() const { return height_; }

  /// Camera-frame ray through an image position: K^-1 (px, py, 1). The z
  /// component is exactly 1, so the ray parameter equals camera-frame depth.
  Vec3 ray_direction(double px, double py) const;

 private:
  Mat3 k_;
  RigidTransform camera_to_ego_;
  int width_;
  int height_;
};

/// Row-major depth image in meters. 0.0 encodes an invalid pixel (no hit /
/// no point); valid values are finite and positive.
struct DepthMap {
  int width{0};
  int height{0};
  std::vector<float> values;

  DepthMap() = default;
  DepthMap(int width_, int height_);
  DepthMap(int width_, int height_, std::vector<float> values_);

  float at(int u, int v) const {
    return values[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + u];
  }
  float& at(int u, int v) {
    return values[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + u];
  }
};

/// Fraction of pixels with a valid (positive) depth.
double valid_fraction(const DepthMap& map);

/// Depth reported when the camera origin sits inside an occupied voxel.
constexpr double kNearClipDepth = 1e-4;

/// Default marching range in meters.
constexpr double kDefaultMaxRange = 100.0;

/// Default fixed-marching step: half the smallest voxel edge, so a sample
/// cannot skip a voxel along the ray's dominant axis.
double default_step(const GridMeta& meta);

/// Fixed-interval ray marching: per pixel, samples the ray through the
/// pixel center at d = step, 2*step, ..., <= max_range and reports the
/// first sample landing in a non-free voxel. Depth is camera-frame z, which
/// equals the marching parameter under the z=1 ray parametrization.
DepthMap raycast_depth_fixed(const OccupancyGrid& grid, const CameraModel& cam,
                             double step, double max_range, unsigned workers = 0);

/// Exact traversal: per pixel, walks the ray through every voxel it pierces
/// (incremental boundary-crossing traversal) and reports the entry depth of
/// the first non-free voxel. Free of step-size artifacts; serves as the
/// default renderer and as the reference for the fixed-step one.
DepthMap raycast_depth_exact(const OccupancyGrid& grid, const CameraModel& cam,
                             double max_range, unsigned workers = 0);

/// Sparse depth from point clouds: transforms each cloud to the current ego
/// frame, projects into the camera, and keeps the minimum camera-frame z
/// per pixel (z-buffer). Points behind the camera are discarded.
DepthMap project_lidar_depth(
    const std::vector<std::pair<PointCloud, RigidTransform>>& clouds,
    const CameraModel& cam);

}  // namespace occground

#endif  // OCCGROUND_DEPTHMAP_HPP_
