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

#include "occground/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace occground {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kRigidTol = 1e-9;
constexpr double kBoundaryEps = 1e-9;
}  // namespace

double normalize_yaw(double yaw) {
  double y = std::fmod(yaw, 2.0 * kPi);
  if (y <= -kPi) {
    y += 2.0 * kPi;
  } else if (y > kPi) {
    y -= 2.0 * kPi;
  }
  return y;
}

RigidTransform::RigidTransform() : m_(Mat4::Identity()) {}

RigidTransform RigidTransform::from_matrix(const Mat4& m) {
  if (!m.allFinite()) {
    throw std::invalid_argument("rigid transform has non-finite entries");
  }
  const Eigen::RowVector4d last = m.row(3);
  if ((last - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > kRigidTol) {
    throw std::invalid_argument("rigid transform last row must be (0,0,0,1)");
  }
  const Mat3 r = m.topLeftCorner<3, 3>();
  if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > kRigidTol) {
    throw std::invalid_argument("rigid transform rotation is not orthonormal");
  }
  if (r.determinant() < 0.0) {
    throw std::invalid_argument("rigid transform rotation has negative determinant");
  }
  RigidTransform t;
  t.m_ = m;
  t.m_.row(3) = Eigen::RowVector4d(0, 0, 0, 1);
  return t;
}

RigidTransform RigidTransform::from_translation(const Vec3& t) {
  RigidTransform out;
  out.m_.topRightCorner<3, 1>() = t;
  return out;
}

RigidTransform RigidTransform::from_rotation_z(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  RigidTransform out;
  out.m_(0, 0) = c;
  out.m_(0, 1) = -s;
  out.m_(1, 0) = s;
  out.m_(1, 1) = c;
  return out;
}

RigidTransform RigidTransform::inverse() const {
  const Mat3 rt = rotation().transpose();
  RigidTransform out;
  out.m_.topLeftCorner<3, 3>() = rt;
  out.m_.topRightCorner<3, 1>() = -(rt * translation());
  return out;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  RigidTransform out;
  out.m_ = m_ * rhs.m_;
  out.m_.row(3) = Eigen::RowVector4d(0, 0, 0, 1);
  return out;
}

Box3D::Box3D(const Vec3& center_, const Vec3& size_, double yaw_)
    : center(center_), size(size_), yaw(normalize_yaw(yaw_)) {
  if (!(size.x() > 0.0 && size.y() > 0.0 && size.z() > 0.0)) {
    throw std::invalid_argument("non-positive box size");
  }
  if (!center.allFinite() || !size.allFinite()) {
    throw std::invalid_argument("box has non-finite entries");
  }
}

bool box_contains(const Box3D& box, const Vec3& p) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const Vec3 d = p - box.center;
  // rotate the offset by -yaw into the box frame
  const double bx = c * d.x() + s * d.y();
  const double by = -s * d.x() + c * d.y();
  return std::abs(bx) <= 0.5 * box.size.x() + kBoundaryEps &&
         std::abs(by) <= 0.5 * box.size.y() + kBoundaryEps &&
         std::abs(d.z()) <= 0.5 * box.size.z() + kBoundaryEps;
}

}  // namespace occground
