// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ssmmot/geometry.hpp"
#include "ssmmot/model.hpp"
#include "ssmmot/mot_io.hpp"

namespace ssmmot {

/// A finished tracklet: contiguous per-frame boxes over [first_frame,
/// last_frame] and one trajectory embedding.
struct TrackletRecord {
    int id = 0;
    int first_frame = 0;
    int last_frame = 0;
    std::vector<BBox> boxes;  // one per frame of the span
    Eigen::VectorXd embedding;
};

struct MergeConfig {
    int max_gap = 50;        // frames
    double max_dist = 50.0;  // pixels between adjacent endpoints
    double tau_cos = 0.3;    // cosine-distance cut
};

struct ExtractResult {
    std::vector<TrackletRecord> records;
    std::vector<int> excluded_ids;    // tracklets too short to embed
    std::int64_t forward_passes = 0;  // must equal records.size()
};

/// One model forward per tracklet (its last up-to-max_len boxes) — the O(N)
/// property. Interior frame gaps are bridged by linear interpolation so the
/// span is contiguous; single-frame tracklets are excluded.
ExtractResult extract_embeddings(const std::vector<MotFrameRecord>& results,
                                 const ModelParams& params, const ModelConfig& cfg,
                                 const ImageSize& img);

enum class GateStatus { Ok, Overlap, GapTooLarge, TooFarApart };

struct GateResult {
    GateStatus status = GateStatus::Ok;
    double distance = 0.0;  // cosine distance when Ok
};

/// Cosine distance between trajectory embeddings, gated: pairs whose spans
/// overlap, whose temporal gap exceeds max_gap, or whose adjacent endpoint
/// centers are further than max_dist apart are forbidden.
GateResult gated_distance(const TrackletRecord& a, const TrackletRecord& b,
                          const MergeConfig& cfg);

/// Agglomerative clustering with average linkage over gated distances. A
/// merge is forbidden if any cross pair is forbidden; merging stops once the
/// smallest inter-cluster distance reaches tau_cos. Ties break on the
/// smallest member id. Returns clusters of tracklet ids.
std::vector<std::vector<int>> cluster(const std::vector<TrackletRecord>& records,
                                      const MergeConfig& cfg);

/// Relabels every cluster to its smallest member id, preserving boxes.
/// Throws OverlapViolation if two same-cluster tracklets share a frame.
std::vector<MotFrameRecord> apply_merge(const std::vector<MotFrameRecord>& results,
                                        const std::vector<std::vector<int>>& partition);

}  // namespace ssmmot
