// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/benchmark.hpp"

#include "ssmmot/kalman.hpp"

namespace ssmmot {

HorizonReport prediction_benchmark(const TrackletStore& store,
                                   const ModelParams& params,
                                   const ModelConfig& cfg, int horizons) {
    HorizonReport report;
    report.ssm_iou.assign(horizons, 0.0);
    report.kf_iou.assign(horizons, 0.0);

    const int n = cfg.max_len;
    for (const auto& trk : store.tracklets) {
        const int len = static_cast<int>(trk.boxes.size());
        for (int t = n; t + horizons <= len; ++t) {
            const std::vector<NormBox> window(trk.boxes.begin() + (t - n),
                                              trk.boxes.begin() + t);

            const std::vector<NormBox> preds = rollout(window, params, cfg, horizons);

            KFState kf = kf_init(from_norm(window.front(), trk.img));
            for (int i = 1; i < n; ++i) {
                kf = kf_predict(kf);
                kf = kf_update(kf, from_norm(window[i], trk.img));
            }

            for (int k = 0; k < horizons; ++k) {
                const BBox truth = from_norm(trk.boxes[t + k], trk.img);
                report.ssm_iou[k] += iou(from_norm(preds[k], trk.img), truth);
                kf = kf_predict(kf);
                report.kf_iou[k] += iou(kf_to_bbox(kf), truth);
            }
            ++report.windows;
        }
    }

    if (report.windows > 0) {
        for (int k = 0; k < horizons; ++k) {
            report.ssm_iou[k] /= double(report.windows);
            report.kf_iou[k] /= double(report.windows);
        }
    }
    return report;
}

}  // namespace ssmmot
