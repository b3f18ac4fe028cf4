// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/kalman.hpp"

#include "ssmmot/errors.hpp"

namespace ssmmot {

namespace {

constexpr double kStdWeightPosition = 1.0 / 20.0;
constexpr double kStdWeightVelocity = 1.0 / 160.0;

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat48 = Eigen::Matrix<double, 4, 8>;

Mat8 transition() {
    Mat8 f = Mat8::Identity();
    for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
    return f;
}

Mat48 measurement() {
    Mat48 h = Mat48::Zero();
    for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
    return h;
}

Vec4 to_measurement(const BBox& b) {
    Vec4 z;
    z << b.x + 0.5 * b.w, b.y + 0.5 * b.h, b.w / b.h, b.h;
    return z;
}

}  // namespace

KFState kf_init(const BBox& b) {
    KFState s;
    s.mean.head<4>() = to_measurement(b);

    const double h = s.mean(3);
    Vec8 std;
    std << 2 * kStdWeightPosition * h, 2 * kStdWeightPosition * h, 1e-2,
        2 * kStdWeightPosition * h, 10 * kStdWeightVelocity * h,
        10 * kStdWeightVelocity * h, 1e-5, 10 * kStdWeightVelocity * h;
    s.cov = std.cwiseProduct(std).asDiagonal();
    return s;
}

KFState kf_predict(const KFState& s) {
    const double h = s.mean(3);
    Vec8 std;
    std << kStdWeightPosition * h, kStdWeightPosition * h, 1e-2,
        kStdWeightPosition * h, kStdWeightVelocity * h, kStdWeightVelocity * h,
        1e-5, kStdWeightVelocity * h;
    const Mat8 q = std.cwiseProduct(std).asDiagonal();

    static const Mat8 f = transition();
    KFState out;
    out.mean = f * s.mean;
    out.cov = f * s.cov * f.transpose() + q;
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    return out;
}

KFState kf_update(const KFState& s, const BBox& z) {
    const double h = s.mean(3);
    Vec4 std;
    std << kStdWeightPosition * h, kStdWeightPosition * h, 1e-1,
        kStdWeightPosition * h;
    const Mat4 r = std.cwiseProduct(std).asDiagonal();

    static const Mat48 hm = measurement();
    const Mat4 innov_cov = hm * s.cov * hm.transpose() + r;

    const Eigen::LLT<Mat4> llt(innov_cov);
    if (llt.info() != Eigen::Success) {
        throw NumericalFailure("kf_update: innovation covariance not invertible");
    }
    // K = P Hᵀ S⁻¹ solved as Sᵀ Kᵀ = H Pᵀ.
    const Eigen::Matrix<double, 8, 4> gain =
        llt.solve(hm * s.cov.transpose()).transpose();

    KFState out;
    out.mean = s.mean + gain * (to_measurement(z) - hm * s.mean);
    out.cov = s.cov - gain * innov_cov * gain.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    return out;
}

BBox kf_to_bbox(const KFState& s) {
    BBox b;
    b.h = s.mean(3);
    b.w = s.mean(2) * s.mean(3);
    b.x = s.mean(0) - 0.5 * b.w;
    b.y = s.mean(1) - 0.5 * b.h;
    return b;
}

}  // namespace ssmmot
