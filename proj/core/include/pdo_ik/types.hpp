/*
 * Copyright (C) 2026 PDO-IK Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace pdo_ik {

/// 4x4 homogeneous transform, translations in meters.
using Transform = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;

/// Unconstrained decision variables, one entry per sub-angle slot.
using SlackVector = Eigen::VectorXd;

/// Row-per-point matrix of 3-D positions in meters.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

inline Vec3 translation(const Transform& t) { return t.block<3, 1>(0, 3); }

/// True iff the rotation block is orthonormal with det +1 (within tol) and
/// the bottom row is exactly (0, 0, 0, 1).
bool is_rigid_transform(const Transform& t, double tol = 1e-9);

}  // namespace pdo_ik
