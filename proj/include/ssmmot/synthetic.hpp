// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssmmot/geometry.hpp"
#include "ssmmot/mot_io.hpp"

namespace ssmmot {

enum class MotionKind { Linear, Sinusoid, Bounce, RandomWalk };

MotionKind parse_motion_kind(const std::string& name);
std::string motion_kind_name(MotionKind kind);

struct SyntheticConfig {
    MotionKind kind = MotionKind::Sinusoid;
    int objects = 8;
    int frames = 300;
    ImageSize image{1024, 768};
    double occlusion_rate = 0.0;   // per-frame probability a detection is dropped
    double det_noise_std = 0.0;    // pixels, center and size
    double low_conf_fraction = 0.0;  // fraction of detections scored in [0.1, 0.6)
    std::uint64_t seed = 0;
};

struct SyntheticResult {
    std::vector<MotFrameRecord> gt;
    std::vector<MotFrameRecord> detections;
};

/// Deterministic trajectory simulator. Ground-truth boxes stay inside the
/// image for the linear, sinusoid and bounce kinds; detections are the GT
/// boxes with Gaussian center/size noise, random drops, and id -1.
SyntheticResult gen_synthetic(const SyntheticConfig& cfg);

}  // namespace ssmmot
