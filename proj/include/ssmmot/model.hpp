// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ssmmot/geometry.hpp"

namespace ssmmot {

struct ModelConfig {
    int n_blocks = 2;
    int model_dim = 64;     // D
    int expand_factor = 2;  // E_f; inner width E = expand_factor * model_dim
    int input_dim = 4;
    int embed_dim = 64;
    int max_len = 10;       // n, longest history the model consumes

    int inner_dim() const { return expand_factor * model_dim; }
};

/// One gated-SSM block. The continuous (A, B) pair is collapsed into a single
/// input-dependent sigmoid gate: Abar = 1 - sigmoid(W_gate x + b_gate),
/// Bbar = sigmoid(W_gate x + b_gate), so Abar + Bbar = 1 per channel by
/// construction. C is the diagonal map c_out.
struct BlockParams {
    Eigen::VectorXd norm_scale;  // D
    Eigen::VectorXd norm_bias;   // D
    Eigen::MatrixXd w_in;        // 2E x D, rows [0,E) signal branch, [E,2E) gate branch
    Eigen::MatrixXd w_gate;      // E x E
    Eigen::VectorXd b_gate;      // E
    Eigen::VectorXd c_out;       // E
    Eigen::MatrixXd w_out;       // D x E
};

/// Two-layer perceptron with SiLU hidden activation.
struct Mlp {
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;
    Eigen::VectorXd b2;
};

struct ModelParams {
    Eigen::MatrixXd proj_w;  // D x 4
    Eigen::VectorXd proj_b;  // D
    std::vector<BlockParams> blocks;
    Mlp head_pred;  // D -> D -> 4
    Mlp head_emb;   // D -> D -> embed_dim
};

/// Recurrent state of one block's scan.
struct ScanState {
    Eigen::VectorXd h;
    int position = 0;
};

struct BlockCache {
    Eigen::MatrixXd input;      // D x T, pre-norm block input
    Eigen::VectorXd mean;       // T
    Eigen::VectorXd rstd;       // T
    Eigen::MatrixXd normed;     // D x T, (x - mean) * rstd before scale/bias
    Eigen::MatrixXd branch_in;  // 2E x T, w_in * u
    Eigen::MatrixXd gate_pre;   // E x T
    Eigen::MatrixXd gate;       // E x T
    Eigen::MatrixXd hidden;     // E x T
    Eigen::MatrixXd scan_out;   // E x T, c_out .* hidden
    Eigen::MatrixXd silu_gate;  // E x T, silu(gate branch)
    Eigen::MatrixXd output;     // D x T
};

/// Every intermediate needed for an exact reverse pass.
struct ForwardCache {
    Eigen::MatrixXd inputs;  // 4 x T
    Eigen::MatrixXd proj;    // D x T
    std::vector<BlockCache> blocks;
    Eigen::VectorXd last;  // D, final block output at the last timestep
    // prediction head
    Eigen::VectorXd pred_pre;     // D, W1 last + b1
    Eigen::VectorXd pred_hidden;  // D, silu(pred_pre)
    Eigen::Vector4d pred_delta;
    // embedding head
    Eigen::VectorXd emb_pre;
    Eigen::VectorXd emb_hidden;
    Eigen::VectorXd emb_raw;
    double emb_norm = 0.0;
    bool emb_fallback = false;
    Eigen::VectorXd embedding;
    NormBox last_box;
    NormBox pred_box;
    bool clamped_w = false;
    bool clamped_h = false;
};

struct ForwardResult {
    Eigen::Vector4d pred_delta;
    NormBox pred_box;          // last observed box + delta, sizes floored
    Eigen::VectorXd embedding;  // unit length
};

constexpr double kLayerNormEps = 1e-10;
constexpr double kMinNormSize = 1e-4;  // floor on predicted normalized w/h
constexpr double kEmbNormFloor = 1e-12;

double sigmoid(double x);
double silu(double x);
double silu_grad(double x);

/// Deterministic init: weights uniform in +-1/sqrt(fan_in), biases zero,
/// norm scale one.
ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed);

/// The selective recurrence of one block over a sequence of E-vectors
/// (columns of `inputs`): g_t = sigmoid(w_gate x_t + b_gate),
/// h_t = (1 - g_t) .* h_{t-1} + g_t .* x_t, y_t = c_out .* h_t.
std::pair<Eigen::MatrixXd, ScanState> selective_scan(const Eigen::MatrixXd& inputs,
                                                     const BlockParams& params,
                                                     const Eigen::VectorXd& h0);

/// Full block: layernorm, input projection split into signal and SiLU gate
/// branches, selective scan, output projection, residual.
Eigen::MatrixXd block_forward(const Eigen::MatrixXd& seq, const BlockParams& params,
                              BlockCache& cache);

/// Runs the stacked model on a box history (length 2..max_len). The final
/// block's last-timestep output feeds both heads. Throws HistoryTooShort /
/// HistoryTooLong.
ForwardResult model_forward(const std::vector<NormBox>& history,
                            const ModelParams& params, const ModelConfig& cfg,
                            ForwardCache* cache = nullptr);

/// Autoregressive k-step prediction: each predicted box is appended to the
/// history (oldest dropped past max_len) and the model re-run.
std::vector<NormBox> rollout(const std::vector<NormBox>& history,
                             const ModelParams& params, const ModelConfig& cfg,
                             int steps);

/// Adds a predicted delta to the last observed box, flooring w/h.
NormBox apply_delta(const NormBox& last, const Eigen::Vector4d& delta,
                    bool* clamped_w = nullptr, bool* clamped_h = nullptr);

/// Process-wide count of model_forward invocations; the tracklet-merging
/// stage asserts O(N) extraction against it.
std::int64_t model_forward_call_count();
void reset_model_forward_call_count();

// Canonical tensor enumeration shared by the checkpoint format, the
// optimizer, and gradient checking.
struct TensorSpec {
    std::string name;
    int rows = 0;
    int cols = 0;  // 0 = vector record
    std::ptrdiff_t offset = 0;

    int size() const { return rows * (cols > 0 ? cols : 1); }
};

std::vector<TensorSpec> tensor_specs(const ModelConfig& cfg);
int param_count(const ModelConfig& cfg);
Eigen::VectorXd pack_params(const ModelParams& params, const ModelConfig& cfg);
ModelParams unpack_params(const Eigen::VectorXd& flat, const ModelConfig& cfg);

/// Zero-valued parameter struct with cfg's shapes.
ModelParams zero_params(const ModelConfig& cfg);

}  // namespace ssmmot
