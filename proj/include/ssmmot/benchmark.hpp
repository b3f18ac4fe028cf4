// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <vector>

#include "ssmmot/model.hpp"
#include "ssmmot/training.hpp"

namespace ssmmot {

/// Mean next-frame(s) prediction IoU of the SSM rollout and a multi-step
/// Kalman predict over sliding ground-truth windows. Index k-1 holds
/// horizon k.
struct HorizonReport {
    std::vector<double> ssm_iou;
    std::vector<double> kf_iou;
    long windows = 0;
};

HorizonReport prediction_benchmark(const TrackletStore& store,
                                   const ModelParams& params,
                                   const ModelConfig& cfg, int horizons);

}  // namespace ssmmot
