// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <vector>

#include "ssmmot/geometry.hpp"
#include "ssmmot/kalman.hpp"
#include "ssmmot/model.hpp"
#include "ssmmot/mot_io.hpp"

namespace ssmmot {

struct Detection {
    BBox bbox;
    double score = 0.0;
    int frame = 1;
};

struct AssociationConfig {
    double tau_high = 0.6;        // first-stage detection score floor
    double tau_low = 0.1;         // second-stage score floor
    double iou_gate_stage1 = 0.3;
    double iou_gate_stage2 = 0.5;
    int max_age = 30;             // frames a track may stay lost
    int min_hits = 3;             // consecutive matches before Tentative -> Active
    double new_track_score = 0.7;
};

enum class TrackState { Tentative, Active, Lost, Removed };

/// Per-track motion predictor. predict() is called once per frame for every
/// live track and advances the model; exactly one of update()/miss() follows.
class MotionModel {
public:
    virtual ~MotionModel() = default;
    virtual BBox predict() = 0;
    virtual void update(const BBox& matched) = 0;
    virtual void miss() = 0;
};

using MotionFactory = std::function<std::unique_ptr<MotionModel>(const BBox&)>;

MotionFactory kalman_motion_factory();

/// SSM motion: keeps the detection history in normalized coordinates and,
/// while the track is lost, feeds its own predictions back in, which is the
/// autoregressive rollout.
MotionFactory ssm_motion_factory(std::shared_ptr<const ModelParams> params,
                                 const ModelConfig& cfg, const ImageSize& img);

struct Track {
    int id = 0;
    TrackState state = TrackState::Tentative;
    bool confirmed = false;  // ever reached Active
    int frames_since_update = 0;
    int hits = 0;  // consecutive matches
    double score = 0.0;
    std::deque<std::pair<int, BBox>> history;  // (frame, box), capped at max_len
    BBox predicted;
    std::unique_ptr<MotionModel> motion;
};

/// 1 - IoU between predictions and detections; pairs below the gate are
/// forbidden.
std::vector<std::vector<double>> iou_cost(const std::vector<BBox>& predictions,
                                          const std::vector<BBox>& detections,
                                          double gate);

/// BYTE-style online tracker: stage 1 associates confident detections to all
/// live tracks, stage 2 recovers non-lost tracks from low-score detections.
class ByteTracker {
public:
    ByteTracker(const AssociationConfig& cfg, MotionFactory factory,
                int history_cap = 10);

    /// One tracking step; returns the records emitted for this frame.
    /// Throws FrameMismatch if a detection carries a different frame index.
    std::vector<MotFrameRecord> step(int frame, const std::vector<Detection>& detections);

    const std::vector<Track>& tracks() const { return tracks_; }

private:
    AssociationConfig cfg_;
    MotionFactory factory_;
    int history_cap_;
    int next_id_ = 1;
    std::vector<Track> tracks_;
};

/// Runs a tracker over per-frame detections (frames 1..num_frames, ascending)
/// and returns the emitted MOT records.
std::vector<MotFrameRecord> track_sequence(const std::vector<Detection>& detections,
                                           int num_frames,
                                           const AssociationConfig& cfg,
                                           const MotionFactory& factory,
                                           int history_cap = 10);

}  // namespace ssmmot
