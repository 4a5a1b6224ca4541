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

#ifndef OCCGROUND_GEOMETRY_HPP_
#define OCCGROUND_GEOMETRY_HPP_

#include <Eigen/Dense>

namespace occground {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Wraps an angle into (-pi, pi].
double normalize_yaw(double yaw);

/// A proper rigid motion (rotation + translation) stored as a 4x4
/// homogeneous matrix. Construction validates that the rotation block is
/// orthonormal with determinant +1 (within 1e-9) and that the last row is
/// (0, 0, 0, 1).
class RigidTransform {
 public:
  RigidTransform();  // identity

  static RigidTransform from_matrix(const Mat4& m);
  static RigidTransform from_translation(const Vec3& t);
  static RigidTransform from_rotation_z(double angle);

  const Mat4& matrix() const { return m_; }
  Mat3 rotation() const { return m_.topLeftCorner<3, 3>(); }
  Vec3 translation() const { return m_.topRightCorner<3, 1>(); }

  Vec3 apply(const Vec3& p) const {
    return rotation() * p + translation();
  }

  RigidTransform inverse() const;
  RigidTransform operator*(const RigidTransform& rhs) const;

 private:
  Mat4 m_;
};

/// Applies a rigid transform to a point: R * p + t.
inline Vec3 apply_transform(const RigidTransform& t, const Vec3& p) {
  return t.apply(p);
}

/// A yaw-rotated 3D bounding box in the ego frame. `size` is the full
/// extent (length, width, height) along the box axes; yaw rotates about +z
/// and is normalized into (-pi, pi] on construction.
struct Box3D {
  Vec3 center{Vec3::Zero()};
  Vec3 size{Vec3::Ones()};
  double yaw{0.0};

  Box3D() = default;
  Box3D(const Vec3& center_, const Vec3& size_, double yaw_);
};

/// True iff `p`, expressed in the box frame, lies within the half-extents.
/// The boundary is inclusive with a 1e-9 slack so points exactly on a face
/// count as contained.
bool box_contains(const Box3D& box, const Vec3& p);

}  // namespace occground

#endif  // OCCGROUND_GEOMETRY_HPP_
