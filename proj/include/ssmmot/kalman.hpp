// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <Eigen/Dense>

#include "ssmmot/geometry.hpp"

namespace ssmmot {

/// Constant-velocity Kalman state, SORT/ByteTrack convention:
/// mean = (cx, cy, a, h, vcx, vcy, va, vh) with aspect a = w/h.
struct KFState {
    Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 8> cov = Eigen::Matrix<double, 8, 8>::Zero();
};

KFState kf_init(const BBox& b);
KFState kf_predict(const KFState& s);

/// Standard Kalman correction on the (cx, cy, a, h) measurement.
/// Throws NumericalFailure if the innovation covariance is not invertible.
KFState kf_update(const KFState& s, const BBox& z);

BBox kf_to_bbox(const KFState& s);

}  // namespace ssmmot
