// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <vector>

#include "ssmmot/mot_io.hpp"

namespace ssmmot {

struct MetricReport {
    double mota = 0.0;
    double idf1 = 0.0;
    double hota = 0.0;
    double det_a = 0.0;
    double ass_a = 0.0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
    long gt_count = 0;
};

struct ClearResult {
    double mota = 0.0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
    long gt_count = 0;
};

/// CLEAR MOT accumulation: per-frame Hungarian matching at IoU >= 0.5 with
/// match-continuity preference; MOTA = 1 - (FN + FP + IDSW) / GT.
ClearResult mota(const std::vector<MotFrameRecord>& gt,
                 const std::vector<MotFrameRecord>& res);

/// Global trajectory-level F1: min-cost bipartite matching of identities
/// over per-frame IoU >= 0.5 overlap counts.
double idf1(const std::vector<MotFrameRecord>& gt,
            const std::vector<MotFrameRecord>& res);

struct HotaResult {
    double hota = 0.0;
    double det_a = 0.0;
    double ass_a = 0.0;
};

/// HOTA averaged over alpha in {0.05, 0.10, ..., 0.95}.
HotaResult hota(const std::vector<MotFrameRecord>& gt,
                const std::vector<MotFrameRecord>& res);

MetricReport evaluate_all(const std::vector<MotFrameRecord>& gt,
                          const std::vector<MotFrameRecord>& res);

}  // namespace ssmmot
