// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/association.hpp"

#include <algorithm>
#include <limits>

#include "ssmmot/assignment.hpp"
#include "ssmmot/errors.hpp"

namespace ssmmot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class KalmanMotion : public MotionModel {
public:
    explicit KalmanMotion(const BBox& init) : state_(kf_init(init)) {}

    BBox predict() override {
        state_ = kf_predict(state_);
        return kf_to_bbox(state_);
    }

    void update(const BBox& matched) override { state_ = kf_update(state_, matched); }

    void miss() override {}  // prediction already advanced the state

private:
    KFState state_;
};

class SsmMotion : public MotionModel {
public:
    SsmMotion(const BBox& init, std::shared_ptr<const ModelParams> params,
              const ModelConfig& cfg, const ImageSize& img)
        : params_(std::move(params)), cfg_(cfg), img_(img) {
        history_.push_back(to_norm(init, img_));
    }

    BBox predict() override {
        if (history_.size() < 2) {
            pending_ = history_.back();  // constant position until warm
        } else {
            const std::vector<NormBox> window(history_.begin(), history_.end());
            ForwardCache cache;
            const ForwardResult res = model_forward(window, *params_, cfg_, &cache);
            pending_ = res.pred_box;
            hidden_.clear();
            for (const auto& blk : cache.blocks) {
                hidden_.push_back(
                    ScanState{blk.hidden.col(blk.hidden.cols() - 1),
                              static_cast<int>(blk.hidden.cols())});
            }
        }
        return from_norm(pending_, img_);
    }

    void update(const BBox& matched) override { push(to_norm(matched, img_)); }

    void miss() override { push(pending_); }  // autoregressive rollout

private:
    void push(const NormBox& box) {
        history_.push_back(box);
        while (static_cast<int>(history_.size()) > cfg_.max_len) {
            history_.pop_front();
        }
    }

    std::shared_ptr<const ModelParams> params_;
    ModelConfig cfg_;
    ImageSize img_;
    std::deque<NormBox> history_;
    NormBox pending_;
    std::vector<ScanState> hidden_;  // recurrent state from the last forward
};

}  // namespace

MotionFactory kalman_motion_factory() {
    return [](const BBox& init) -> std::unique_ptr<MotionModel> {
        return std::make_unique<KalmanMotion>(init);
    };
}

MotionFactory ssm_motion_factory(std::shared_ptr<const ModelParams> params,
                                 const ModelConfig& cfg, const ImageSize& img) {
    return [params, cfg, img](const BBox& init) -> std::unique_ptr<MotionModel> {
        return std::make_unique<SsmMotion>(init, params, cfg, img);
    };
}

std::vector<std::vector<double>> iou_cost(const std::vector<BBox>& predictions,
                                          const std::vector<BBox>& detections,
                                          double gate) {
    std::vector<std::vector<double>> cost(
        predictions.size(), std::vector<double>(detections.size(), kInf));
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        for (std::size_t j = 0; j < detections.size(); ++j) {
            const double v = iou(predictions[i], detections[j]);
            if (v >= gate) cost[i][j] = 1.0 - v;
        }
    }
    return cost;
}

ByteTracker::ByteTracker(const AssociationConfig& cfg, MotionFactory factory,
                         int history_cap)
    : cfg_(cfg), factory_(std::move(factory)), history_cap_(history_cap) {}

std::vector<MotFrameRecord> ByteTracker::step(int frame,
                                              const std::vector<Detection>& detections) {
    for (const auto& det : detections) {
        if (det.frame != frame) {
            throw FrameMismatch("detection frame does not match step frame");
        }
    }

    // Every live track predicts once per frame.
    for (auto& trk : tracks_) trk.predicted = trk.motion->predict();

    std::vector<int> high, low;
    for (std::size_t j = 0; j < detections.size(); ++j) {
        if (detections[j].score >= cfg_.tau_high) {
            high.push_back(static_cast<int>(j));
        } else if (detections[j].score >= cfg_.tau_low) {
            low.push_back(static_cast<int>(j));
        }
    }

    std::vector<int> matched_det(tracks_.size(), -1);
    std::vector<bool> det_used(detections.size(), false);

    auto associate = [&](const std::vector<int>& track_idx,
                         const std::vector<int>& det_idx, double gate) {
        if (track_idx.empty() || det_idx.empty()) return;
        std::vector<BBox> preds, boxes;
        preds.reserve(track_idx.size());
        boxes.reserve(det_idx.size());
        for (int ti : track_idx) preds.push_back(tracks_[ti].predicted);
        for (int dj : det_idx) boxes.push_back(detections[dj].bbox);
        const Assignment asg = hungarian(iou_cost(preds, boxes, gate));
        for (std::size_t r = 0; r < track_idx.size(); ++r) {
            if (asg.row_to_col[r] < 0) continue;
            const int dj = det_idx[asg.row_to_col[r]];
            matched_det[track_idx[r]] = dj;
            det_used[dj] = true;
        }
    };

    // Stage 1: every live track against confident detections.
    std::vector<int> stage1;
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
        if (tracks_[i].state != TrackState::Removed) stage1.push_back(static_cast<int>(i));
    }
    associate(stage1, high, cfg_.iou_gate_stage1);

    // Stage 2: still-tracked leftovers against low-score detections. Lost
    // tracks sit this one out.
    std::vector<int> stage2;
    for (int ti : stage1) {
        if (matched_det[ti] < 0 && tracks_[ti].state != TrackState::Lost) {
            stage2.push_back(ti);
        }
    }
    associate(stage2, low, cfg_.iou_gate_stage2);

    std::vector<MotFrameRecord> emitted;
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
        Track& trk = tracks_[i];
        if (trk.state == TrackState::Removed) continue;
        if (matched_det[i] >= 0) {
            const Detection& det = detections[matched_det[i]];
            trk.motion->update(det.bbox);
            trk.history.emplace_back(frame, det.bbox);
            while (static_cast<int>(trk.history.size()) > history_cap_) {
                trk.history.pop_front();
            }
            trk.frames_since_update = 0;
            trk.hits += 1;
            trk.score = det.score;
            if (trk.state == TrackState::Lost) {
                trk.state = trk.confirmed ? TrackState::Active : TrackState::Tentative;
            }
            if (trk.state == TrackState::Tentative && trk.hits >= cfg_.min_hits) {
                trk.state = TrackState::Active;
            }
            if (trk.state == TrackState::Active) {
                trk.confirmed = true;
                emitted.push_back(MotFrameRecord{frame, trk.id, det.bbox, trk.score});
            }
        } else {
            trk.motion->miss();
            trk.frames_since_update += 1;
            trk.hits = 0;
            trk.state = trk.frames_since_update > cfg_.max_age ? TrackState::Removed
                                                               : TrackState::Lost;
        }
    }

    // Fresh tracks from confident unmatched detections. IDs only grow.
    for (int dj : high) {
        if (det_used[dj] || detections[dj].score < cfg_.new_track_score) continue;
        Track trk;
        trk.id = next_id_++;
        trk.hits = 1;
        trk.score = detections[dj].score;
        trk.state = cfg_.min_hits <= 1 ? TrackState::Active : TrackState::Tentative;
        trk.history.emplace_back(frame, detections[dj].bbox);
        trk.motion = factory_(detections[dj].bbox);
        if (trk.state == TrackState::Active) {
            trk.confirmed = true;
            emitted.push_back(
                MotFrameRecord{frame, trk.id, detections[dj].bbox, trk.score});
        }
        tracks_.push_back(std::move(trk));
    }

    // Drop removed tracks; their IDs are never reused.
    std::erase_if(tracks_, [](const Track& t) { return t.state == TrackState::Removed; });

    return emitted;
}

std::vector<MotFrameRecord> track_sequence(const std::vector<Detection>& detections,
                                           int num_frames,
                                           const AssociationConfig& cfg,
                                           const MotionFactory& factory,
                                           int history_cap) {
    std::vector<std::vector<Detection>> per_frame(num_frames + 1);
    int max_frame = num_frames;
    for (const auto& det : detections) {
        if (det.frame < 1) throw FrameMismatch("detection frame must be >= 1");
        if (det.frame > max_frame) max_frame = det.frame;
    }
    per_frame.resize(max_frame + 1);
    for (const auto& det : detections) per_frame[det.frame].push_back(det);

    ByteTracker tracker(cfg, factory, history_cap);
    std::vector<MotFrameRecord> out;
    for (int frame = 1; frame <= max_frame; ++frame) {
        auto emitted = tracker.step(frame, per_frame[frame]);
        out.insert(out.end(), emitted.begin(), emitted.end());
    }
    return out;
}

}  // namespace ssmmot
