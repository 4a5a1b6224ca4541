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

#include "occground/depthmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "occground/parallel.hpp"

namespace occground {

namespace {
constexpr double kIntrinsicsTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

CameraModel::CameraModel(const Mat3& intrinsics, const RigidTransform& camera_to_ego,
                         int width, int height)
    : k_(intrinsics), camera_to_ego_(camera_to_ego), width_(width), height_(height) {
  if (width_ < 1 || height_ < 1) {
    throw std::invalid_argument("image size must be at least 1x1");
  }
  if (!k_.allFinite()) {
    throw std::invalid_argument("intrinsics have non-finite entries");
  }
  if (std::abs(k_(2, 0)) > kIntrinsicsTol || std::abs(k_(2, 1)) > kIntrinsicsTol ||
      std::abs(k_(2, 2) - 1.0) > kIntrinsicsTol || std::abs(k_(1, 0)) > kIntrinsicsTol) {
    throw std::invalid_argument("intrinsics must have the pinhole form");
  }
  if (!(k_(0, 0) > 0.0) || !(k_(1, 1) > 0.0)) {
    throw std::invalid_argument("non-invertible intrinsics (fx, fy must be positive)");
  }
  k_(2, 0) = 0.0;
  k_(2, 1) = 0.0;
  k_(2, 2) = 1.0;
  k_(1, 0) = 0.0;
}

Vec3 CameraModel::ray_direction(double px, double py) const {
  // analytic inverse keeps the z component exactly 1
  const double yc = (py - k_(1, 2)) / k_(1, 1);
  const double xc = (px - k_(0, 2) - k_(0, 1) * yc) / k_(0, 0);
  return Vec3(xc, yc, 1.0);
}

DepthMap::DepthMap(int width_, int height_)
    : width(width_),
      height(height_),
      values(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), 0.0f) {
  if (width_ < 1 || height_ < 1) {
    throw std::invalid_argument("depth map size must be at least 1x1");
  }
}

DepthMap::DepthMap(int width_, int height_, std::vector<float> values_)
    : width(width_), height(height_), values(std::move(values_)) {
  if (width_ < 1 || height_ < 1) {
    throw std::invalid_argument("depth map size must be at least 1x1");
  }
  if (values.size() !=
      static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw std::invalid_argument("depth payload length does not match size");
  }
  for (const float v : values) {
    if (!std::isfinite(v) || v < 0.0f) {
      throw std::invalid_argument("non-finite depth");
    }
  }
}

double valid_fraction(const DepthMap& map) {
  if (map.values.empty()) {
    return 0.0;
  }
  std::size_t valid = 0;
  for (const float v : map.values) {
    if (v > 0.0f) {
      ++valid;
    }
  }
  return static_cast<double>(valid) / static_cast<double>(map.values.size());
}

double default_step(const GridMeta& meta) {
  return 0.5 * meta.voxel_size.minCoeff();
}

DepthMap raycast_depth_fixed(const OccupancyGrid& grid, const CameraModel& cam,
                             double step, double max_range, unsigned workers) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("step must be positive");
  }
  if (!(max_range > step)) {
    throw std::invalid_argument("max_range must exceed step");
  }
  const GridMeta& meta = grid.meta();
  const RigidTransform& pose = cam.camera_to_ego();
  const auto n_max = static_cast<long>(std::floor(max_range / step + 1e-9));

  DepthMap map(cam.width(), cam.height());
  parallel_for(static_cast<std::size_t>(cam.height()), workers, [&](std::size_t row) {
    const auto v = static_cast<int>(row);
    for (int u = 0; u < cam.width(); ++u) {
      const Vec3 dir_cam = cam.ray_direction(u + 0.5, v + 0.5);
      const Vec3 dir = pose.rotation() * dir_cam;
      const Vec3 origin = pose.translation() - meta.origin;

      // samples outside the grid's parameter window can never hit; the
      // window is padded so boundary samples stay included
      double t_lo = 0.0;
      double t_hi = max_range;
      for (int a = 0; a < 3 && t_lo <= t_hi; ++a) {
        const double extent = meta.dims[a] * meta.voxel_size[a];
        if (dir[a] == 0.0) {
          if (origin[a] < 0.0 || origin[a] >= extent) {
            t_hi = -1.0;
          }
          continue;
        }
        double ta = (0.0 - origin[a]) / dir[a];
        double tb = (extent - origin[a]) / dir[a];
        if (ta > tb) {
          std::swap(ta, tb);
        }
        t_lo = std::max(t_lo, ta);
        t_hi = std::min(t_hi, tb);
      }
      if (t_lo > t_hi) {
        continue;
      }
      const long n_start = std::max<long>(1, static_cast<long>(std::ceil(t_lo / step - 1e-9)));
      const long n_end = std::min(n_max, static_cast<long>(std::floor(t_hi / step + 1e-9)));

      for (long n = n_start; n <= n_end; ++n) {
        const double d = static_cast<double>(n) * step;
        const Vec3 p_ego = pose.apply(d * dir_cam);
        if (const auto idx = voxel_index(p_ego, meta)) {
          if (grid.at(*idx) != kFreeLabel) {
            map.at(u, v) = static_cast<float>(d);
            break;
          }
        }
      }
    }
  });
  return map;
}

namespace {

// One pixel of the exact renderer: incremental boundary-crossing traversal
// ("A Fast Voxel Traversal Algorithm for Ray Tracing", Amanatides & Woo,
// 1987) run in grid-local coordinates, with the ray parametrized by
// camera-frame z.
struct ExactCaster {
  const OccupancyGrid& grid;
  const CameraModel& cam;
  double max_range;

  // The reported depth must back-project into a non-free voxel through the
  // public transform + index path, and it is stored as f32. The entry
  // parameter sits exactly on a cell face, where both the float rounding
  // and the floor map can slip into the neighbouring (free) cell, so
  // candidates are validated after float rounding: the face itself first,
  // then points nudged into the cell by multiples of the float ulp.
  float resolve_hit(double entry, double exit, const Vec3& dir_cam) const {
    const double span = exit - entry;
    const double ulp = 1.2e-7 * (1.0 + std::abs(entry));
    const double mid = entry + 0.5 * span;
    const double candidates[5] = {entry, entry + std::min(4.0 * ulp, 0.5 * span),
                                  entry + std::min(32.0 * ulp, 0.5 * span), mid,
                                  entry + 0.75 * span};
    for (const double d : candidates) {
      const auto stored = static_cast<float>(d);
      const Vec3 p_ego =
          cam.camera_to_ego().apply(static_cast<double>(stored) * dir_cam);
      if (const auto idx = voxel_index(p_ego, grid.meta())) {
        if (grid.at(*idx) != kFreeLabel) {
          return stored;
        }
      }
    }
    return static_cast<float>(mid);
  }

  float cast(int u, int v) const {
    const GridMeta& meta = grid.meta();
    const Vec3 dir_cam = cam.ray_direction(u + 0.5, v + 0.5);
    const Vec3 dir = cam.camera_to_ego().rotation() * dir_cam;
    const Vec3 origin = cam.camera_to_ego().translation() - meta.origin;

    // clip the parameter range to the grid's box
    double t_lo = 0.0;
    double t_hi = max_range;
    for (int a = 0; a < 3; ++a) {
      const double extent = meta.dims[a] * meta.voxel_size[a];
      if (dir[a] == 0.0) {
        if (origin[a] < 0.0 || origin[a] >= extent) {
          return 0.0f;
        }
        continue;
      }
      double ta = (0.0 - origin[a]) / dir[a];
      double tb = (extent - origin[a]) / dir[a];
      if (ta > tb) {
        std::swap(ta, tb);
      }
      t_lo = std::max(t_lo, ta);
      t_hi = std::min(t_hi, tb);
    }
    if (t_lo > t_hi) {
      return 0.0f;
    }

    int cell[3];
    int step[3];
    double t_max[3];
    double t_delta[3];
    const Vec3 start = origin + t_lo * dir;
    for (int a = 0; a < 3; ++a) {
      const double c = std::floor(start[a] / meta.voxel_size[a]);
      cell[a] = std::clamp(static_cast<int>(c), 0, meta.dims[a] - 1);
      if (dir[a] > 0.0) {
        step[a] = 1;
        t_max[a] = ((cell[a] + 1) * meta.voxel_size[a] - origin[a]) / dir[a];
        t_delta[a] = meta.voxel_size[a] / dir[a];
      } else if (dir[a] < 0.0) {
        step[a] = -1;
        t_max[a] = (cell[a] * meta.voxel_size[a] - origin[a]) / dir[a];
        t_delta[a] = -meta.voxel_size[a] / dir[a];
      } else {
        step[a] = 0;
        t_max[a] = kInf;
        t_delta[a] = kInf;
      }
    }

    const std::vector<Label>& labels = grid.labels();
    double t_entry = t_lo;
    while (true) {
      const std::size_t lin = meta.linear_index(cell[0], cell[1], cell[2]);
      if (labels[lin] != kFreeLabel) {
        if (t_entry == 0.0) {
          // camera starts inside an occupied voxel
          return static_cast<float>(kNearClipDepth);
        }
        const double t_exit = std::min({t_max[0], t_max[1], t_max[2]});
        return resolve_hit(t_entry, t_exit, dir_cam);
      }
      int axis = 0;
      if (t_max[1] < t_max[axis]) {
        axis = 1;
      }
      if (t_max[2] < t_max[axis]) {
        axis = 2;
      }
      t_entry = t_max[axis];
      if (t_entry > t_hi) {
        return 0.0f;
      }
      cell[axis] += step[axis];
      if (cell[axis] < 0 || cell[axis] >= meta.dims[axis]) {
        return 0.0f;
      }
      t_max[axis] += t_delta[axis];
    }
  }
};

}  // namespace

DepthMap raycast_depth_exact(const OccupancyGrid& grid, const CameraModel& cam,
                             double max_range, unsigned workers) {
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("max_range must be positive");
  }
  const ExactCaster caster{grid, cam, max_range};
  DepthMap map(cam.width(), cam.height());
  parallel_for(static_cast<std::size_t>(cam.height()), workers, [&](std::size_t row) {
    const auto v = static_cast<int>(row);
    for (int u = 0; u < cam.width(); ++u) {
      map.at(u, v) = caster.cast(u, v);
    }
  });
  return map;
}

DepthMap project_lidar_depth(
    const std::vector<std::pair<PointCloud, RigidTransform>>& clouds,
    const CameraModel& cam) {
  const Mat3& k = cam.intrinsics();
  DepthMap map(cam.width(), cam.height());
  std::vector<double> zbuf(map.values.size(), kInf);

  const RigidTransform ego_to_cam = cam.camera_to_ego().inverse();
  for (const auto& [cloud, to_ego] : clouds) {
    const RigidTransform to_cam = ego_to_cam * to_ego;
    for (const Vec3& p : cloud.points) {
      const Vec3 pc = to_cam.apply(p);
      if (!(pc.z() > 0.0)) {
        continue;
      }
      const double u = k(0, 0) * pc.x() / pc.z() + k(0, 1) * pc.y() / pc.z() + k(0, 2);
      const double v = k(1, 1) * pc.y() / pc.z() + k(1, 2);
      const auto ui = static_cast<long>(std::floor(u));
      const auto vi = static_cast<long>(std::floor(v));
      if (ui < 0 || ui >= cam.width() || vi < 0 || vi >= cam.height()) {
        continue;
      }
      const std::size_t lin =
          static_cast<std::size_t>(vi) * static_cast<std::size_t>(cam.width()) +
          static_cast<std::size_t>(ui);
      zbuf[lin] = std::min(zbuf[lin], pc.z());
    }
  }
  for (std::size_t n = 0; n < zbuf.size(); ++n) {
    if (zbuf[n] < kInf) {
      map.values[n] = static_cast<float>(zbuf[n]);
    }
  }
  return map;
}

}  // namespace occground
