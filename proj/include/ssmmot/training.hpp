// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ssmmot/geometry.hpp"
#include "ssmmot/model.hpp"
#include "ssmmot/rng.hpp"

namespace ssmmot {

/// One training window, left-padded to max_len. Mask entries are true for
/// real frames, contiguous at the right end.
struct TrainSample {
    std::vector<NormBox> seq;
    std::vector<bool> mask;
    NormBox target;
    int track_id = 0;
    ImageSize img;
};

/// Anchor plus a second window, from the same tracklet (positive) or a
/// different one (negative).
struct SamplePair {
    TrainSample anchor;
    TrainSample paired;
    bool same = false;
};

/// A contiguous-frame tracklet in normalized coordinates.
struct Tracklet {
    int track_id = 0;
    int first_frame = 0;
    ImageSize img;
    std::vector<NormBox> boxes;
};

struct TrackletStore {
    std::vector<Tracklet> tracklets;
};

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    long step = 0;
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

AdamState adam_init(const ModelConfig& cfg, double lr = 1e-4);

struct LossReport {
    double loss_giou = 0.0;
    double loss_mse = 0.0;
    double loss_cos = 0.0;
    double loss_total = 0.0;
};

/// Reads MOTChallenge ground-truth directories (gt.txt + seqinfo.txt each)
/// into a tracklet store. Identities are split at frame gaps; runs shorter
/// than 3 frames are dropped.
TrackletStore load_tracklet_store(const std::vector<std::string>& seq_dirs);

/// Samples `batch` anchor/pair windows: window length uniform in
/// [2, max_len], target = the frame after the window, positive pair with
/// probability one half. Throws InsufficientData.
std::vector<SamplePair> sample_batch(const TrackletStore& store,
                                     const ModelConfig& cfg, int batch, Rng& rng);

/// (1 - giou) + mean squared error over the four coordinates, with the
/// analytic gradient w.r.t. the predicted box.
std::pair<double, Eigen::Vector4d> loss_pred(const NormBox& pred,
                                             const NormBox& target);

/// The two-case cosine embedding loss over unit vectors. Gradients are zero
/// in the clamped negative region.
struct CosLoss {
    double value = 0.0;
    Eigen::VectorXd grad_i;
    Eigen::VectorXd grad_j;
};
CosLoss loss_cos(const Eigen::VectorXd& f_i, const Eigen::VectorXd& f_j, bool same);

/// Exact reverse-mode gradients of the mean batch loss. Padded positions are
/// skipped outright, so they contribute nothing to outputs or gradients.
/// Throws NonFiniteLoss.
std::pair<ModelParams, LossReport> backward(const std::vector<SamplePair>& batch,
                                            const ModelParams& params,
                                            const ModelConfig& cfg);

/// Loss only, same reduction as backward. Used by finite differencing.
LossReport batch_loss(const std::vector<SamplePair>& batch,
                      const ModelParams& params, const ModelConfig& cfg);

void adam_step(ModelParams& params, const ModelParams& grads,
               const ModelConfig& cfg, AdamState& state);

/// Scales gradients so their global L2 norm is at most max_norm.
double clip_gradients(ModelParams& grads, const ModelConfig& cfg, double max_norm);

struct TrainOptions {
    int epochs = 500;
    int batch = 32;
    double lr = 1e-4;
    std::uint64_t seed = 0;
    double clip_norm = 5.0;
    std::string checkpoint_path;  // written on completion when set
    std::string loss_csv_path;    // per-epoch loss history when set
};

struct TrainResult {
    ModelParams params;
    std::vector<LossReport> history;  // one entry per epoch
};

TrainResult train(const TrackletStore& store, const ModelConfig& cfg,
                  const TrainOptions& opts);

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::vector<std::pair<std::string, double>> per_tensor;
};

/// Central finite differences over every parameter of a small random model.
GradCheckReport grad_check(const ModelConfig& cfg, std::uint64_t seed);

/// FD gradient of batch_loss, step h per parameter.
Eigen::VectorXd finite_difference_gradients(const std::vector<SamplePair>& batch,
                                            const ModelParams& params,
                                            const ModelConfig& cfg, double h = 1e-5);

/// Per-tensor relative-error report between two flat gradient vectors.
GradCheckReport compare_gradients(const Eigen::VectorXd& analytic,
                                  const Eigen::VectorXd& numeric,
                                  const ModelConfig& cfg);

/// Packs a padded sample back into its real-frame suffix.
std::vector<NormBox> packed_history(const TrainSample& sample);

/// Builds a left-padded sample from a raw window. The window must have at
/// least 2 boxes and at most max_len.
TrainSample make_sample(const std::vector<NormBox>& window, const NormBox& target,
                        int track_id, const ImageSize& img, const ModelConfig& cfg);

}  // namespace ssmmot
