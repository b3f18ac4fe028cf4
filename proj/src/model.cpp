// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/model.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "ssmmot/errors.hpp"
#include "ssmmot/rng.hpp"

namespace ssmmot {

namespace {

std::atomic<std::int64_t> g_forward_calls{0};

Eigen::Vector4d box_to_vec(const NormBox& b) {
    return Eigen::Vector4d(b.cx, b.cy, b.w, b.h);
}

void fill_uniform(Eigen::Ref<Eigen::MatrixXd> m, double bound, Rng& rng) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            m(r, c) = rng.uniform(-bound, bound);
        }
    }
}

}  // namespace

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double silu(double x) { return x * sigmoid(x); }

double silu_grad(double x) {
    const double s = sigmoid(x);
    return s * (1.0 + x * (1.0 - s));
}

ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
    if (cfg.n_blocks < 1 || cfg.model_dim < 1 || cfg.expand_factor < 1 ||
        cfg.max_len < 2) {
        throw std::invalid_argument("init_params: invalid ModelConfig");
    }
    Rng rng(seed);
    const int d = cfg.model_dim;
    const int e = cfg.inner_dim();

    ModelParams p;
    p.proj_w.resize(d, cfg.input_dim);
    fill_uniform(p.proj_w, 1.0 / std::sqrt(double(cfg.input_dim)), rng);
    p.proj_b = Eigen::VectorXd::Zero(d);

    p.blocks.resize(cfg.n_blocks);
    for (auto& blk : p.blocks) {
        blk.norm_scale = Eigen::VectorXd::Ones(d);
        blk.norm_bias = Eigen::VectorXd::Zero(d);
        blk.w_in.resize(2 * e, d);
        fill_uniform(blk.w_in, 1.0 / std::sqrt(double(d)), rng);
        blk.w_gate.resize(e, e);
        fill_uniform(blk.w_gate, 1.0 / std::sqrt(double(e)), rng);
        blk.b_gate = Eigen::VectorXd::Zero(e);
        blk.c_out.resize(e);
        fill_uniform(blk.c_out, 1.0, rng);
        blk.w_out.resize(d, e);
        fill_uniform(blk.w_out, 1.0 / std::sqrt(double(e)), rng);
    }

    auto init_mlp = [&](Mlp& mlp, int out_dim) {
        mlp.w1.resize(d, d);
        fill_uniform(mlp.w1, 1.0 / std::sqrt(double(d)), rng);
        mlp.b1 = Eigen::VectorXd::Zero(d);
        mlp.w2.resize(out_dim, d);
        fill_uniform(mlp.w2, 1.0 / std::sqrt(double(d)), rng);
        mlp.b2 = Eigen::VectorXd::Zero(out_dim);
    };
    init_mlp(p.head_pred, 4);
    init_mlp(p.head_emb, cfg.embed_dim);
    return p;
}

std::pair<Eigen::MatrixXd, ScanState> selective_scan(const Eigen::MatrixXd& inputs,
                                                     const BlockParams& params,
                                                     const Eigen::VectorXd& h0) {
    const Eigen::Index e = inputs.rows();
    const Eigen::Index t_len = inputs.cols();
    if (t_len == 0) throw std::invalid_argument("selective_scan: empty input");

    Eigen::MatrixXd outputs(e, t_len);
    Eigen::VectorXd h = h0;
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const Eigen::VectorXd z = params.w_gate * inputs.col(t) + params.b_gate;
        Eigen::VectorXd g(e);
        for (Eigen::Index i = 0; i < e; ++i) g(i) = sigmoid(z(i));
        h = (Eigen::VectorXd::Ones(e) - g).cwiseProduct(h) +
            g.cwiseProduct(inputs.col(t));
        outputs.col(t) = params.c_out.cwiseProduct(h);
    }
    return {outputs, ScanState{h, static_cast<int>(t_len)}};
}

Eigen::MatrixXd block_forward(const Eigen::MatrixXd& seq, const BlockParams& params,
                              BlockCache& cache) {
    const Eigen::Index d = seq.rows();
    const Eigen::Index t_len = seq.cols();
    if (t_len == 0) throw std::invalid_argument("block_forward: empty sequence");
    const Eigen::Index e = params.b_gate.size();

    cache.input = seq;
    cache.mean.resize(t_len);
    cache.rstd.resize(t_len);
    cache.normed.resize(d, t_len);
    cache.branch_in.resize(2 * e, t_len);
    cache.gate_pre.resize(e, t_len);
    cache.gate.resize(e, t_len);
    cache.hidden.resize(e, t_len);
    cache.scan_out.resize(e, t_len);
    cache.silu_gate.resize(e, t_len);
    cache.output.resize(d, t_len);

    // Everything except the h recurrence is batched over timesteps.
    Eigen::MatrixXd u(d, t_len);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const auto x = seq.col(t);
        const double mu = x.mean();
        const double var = (x.array() - mu).square().mean();
        const double rstd = 1.0 / std::sqrt(var + kLayerNormEps);
        cache.mean(t) = mu;
        cache.rstd(t) = rstd;
        cache.normed.col(t) = (x.array() - mu).matrix() * rstd;
        u.col(t) =
            params.norm_scale.cwiseProduct(cache.normed.col(t)) + params.norm_bias;
    }

    cache.branch_in.noalias() = params.w_in * u;
    const auto a = cache.branch_in.topRows(e);
    cache.gate_pre.noalias() = params.w_gate * a;
    cache.gate_pre.colwise() += params.b_gate;

    for (Eigen::Index t = 0; t < t_len; ++t) {
        for (Eigen::Index i = 0; i < e; ++i) {
            cache.gate(i, t) = sigmoid(cache.gate_pre(i, t));
            cache.silu_gate(i, t) = silu(cache.branch_in(e + i, t));
        }
    }

    Eigen::VectorXd h = Eigen::VectorXd::Zero(e);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const auto g = cache.gate.col(t);
        h = (Eigen::VectorXd::Ones(e) - g).cwiseProduct(h) +
            g.cwiseProduct(a.col(t));
        cache.hidden.col(t) = h;
        cache.scan_out.col(t) = params.c_out.cwiseProduct(h);
    }

    cache.output.noalias() =
        params.w_out * cache.scan_out.cwiseProduct(cache.silu_gate);
    cache.output += seq;
    return cache.output;
}

NormBox apply_delta(const NormBox& last, const Eigen::Vector4d& delta,
                    bool* clamped_w, bool* clamped_h) {
    NormBox out;
    out.cx = last.cx + delta(0);
    out.cy = last.cy + delta(1);
    const double w = last.w + delta(2);
    const double h = last.h + delta(3);
    if (clamped_w) *clamped_w = w < kMinNormSize;
    if (clamped_h) *clamped_h = h < kMinNormSize;
    out.w = std::max(w, kMinNormSize);
    out.h = std::max(h, kMinNormSize);
    return out;
}

ForwardResult model_forward(const std::vector<NormBox>& history,
                            const ModelParams& params, const ModelConfig& cfg,
                            ForwardCache* cache) {
    const int t_len = static_cast<int>(history.size());
    if (t_len < 2) throw HistoryTooShort("model_forward: history length < 2");
    if (t_len > cfg.max_len) throw HistoryTooLong("model_forward: history length > max_len");
    for (const auto& b : history) {
        if (!is_valid(b)) throw std::invalid_argument("model_forward: invalid box");
    }
    g_forward_calls.fetch_add(1, std::memory_order_relaxed);

    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;

    c.inputs.resize(4, t_len);
    for (int t = 0; t < t_len; ++t) c.inputs.col(t) = box_to_vec(history[t]);

    c.proj = (params.proj_w * c.inputs).colwise() + params.proj_b;

    c.blocks.assign(params.blocks.size(), BlockCache{});
    Eigen::MatrixXd seq = c.proj;
    for (std::size_t k = 0; k < params.blocks.size(); ++k) {
        seq = block_forward(seq, params.blocks[k], c.blocks[k]);
    }
    c.last = seq.col(t_len - 1);

    // Prediction head: delta on the last observed box.
    c.pred_pre = params.head_pred.w1 * c.last + params.head_pred.b1;
    c.pred_hidden.resize(c.pred_pre.size());
    for (Eigen::Index i = 0; i < c.pred_pre.size(); ++i) {
        c.pred_hidden(i) = silu(c.pred_pre(i));
    }
    c.pred_delta = params.head_pred.w2 * c.pred_hidden + params.head_pred.b2;

    c.last_box = history.back();
    c.pred_box = apply_delta(c.last_box, c.pred_delta, &c.clamped_w, &c.clamped_h);

    // Embedding head, L2-normalized with a deterministic fallback direction.
    c.emb_pre = params.head_emb.w1 * c.last + params.head_emb.b1;
    c.emb_hidden.resize(c.emb_pre.size());
    for (Eigen::Index i = 0; i < c.emb_pre.size(); ++i) {
        c.emb_hidden(i) = silu(c.emb_pre(i));
    }
    c.emb_raw = params.head_emb.w2 * c.emb_hidden + params.head_emb.b2;
    c.emb_norm = c.emb_raw.norm();
    c.emb_fallback = c.emb_norm <= kEmbNormFloor;
    if (c.emb_fallback) {
        c.embedding = Eigen::VectorXd::Zero(cfg.embed_dim);
        c.embedding(0) = 1.0;
    } else {
        c.embedding = c.emb_raw / c.emb_norm;
    }

    return ForwardResult{c.pred_delta, c.pred_box, c.embedding};
}

std::vector<NormBox> rollout(const std::vector<NormBox>& history,
                             const ModelParams& params, const ModelConfig& cfg,
                             int steps) {
    if (steps < 1) throw std::invalid_argument("rollout: steps must be >= 1");
    std::vector<NormBox> window = history;
    std::vector<NormBox> preds;
    preds.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        if (static_cast<int>(window.size()) > cfg.max_len) {
            window.erase(window.begin(),
                         window.end() - cfg.max_len);
        }
        const ForwardResult res = model_forward(window, params, cfg);
        preds.push_back(res.pred_box);
        window.push_back(res.pred_box);
    }
    return preds;
}

std::int64_t model_forward_call_count() {
    return g_forward_calls.load(std::memory_order_relaxed);
}

void reset_model_forward_call_count() {
    g_forward_calls.store(0, std::memory_order_relaxed);
}

std::vector<TensorSpec> tensor_specs(const ModelConfig& cfg) {
    const int d = cfg.model_dim;
    const int e = cfg.inner_dim();
    std::vector<TensorSpec> specs;
    std::ptrdiff_t off = 0;
    auto add = [&](const std::string& name, int rows, int cols) {
        specs.push_back({name, rows, cols, off});
        off += specs.back().size();
    };
    add("proj_in.w", d, cfg.input_dim);
    add("proj_in.b", d, 0);
    for (int k = 0; k < cfg.n_blocks; ++k) {
        const std::string pre = "blocks." + std::to_string(k) + ".";
        add(pre + "norm_scale", d, 0);
        add(pre + "norm_bias", d, 0);
        add(pre + "w_in", 2 * e, d);
        add(pre + "w_gate", e, e);
        add(pre + "b_gate", e, 0);
        add(pre + "c_out", e, 0);
        add(pre + "w_out", d, e);
    }
    add("head_pred.w1", d, d);
    add("head_pred.b1", d, 0);
    add("head_pred.w2", 4, d);
    add("head_pred.b2", 4, 0);
    add("head_emb.w1", d, d);
    add("head_emb.b1", d, 0);
    add("head_emb.w2", cfg.embed_dim, d);
    add("head_emb.b2", cfg.embed_dim, 0);
    return specs;
}

int param_count(const ModelConfig& cfg) {
    int total = 0;
    for (const auto& s : tensor_specs(cfg)) total += s.size();
    return total;
}

namespace {

// Tensor traversal in tensor_specs order.
template <typename Params, typename Fn>
void for_each_tensor(Params&& p, Fn&& fn) {
    fn(p.proj_w);
    fn(p.proj_b);
    for (auto& blk : p.blocks) {
        fn(blk.norm_scale);
        fn(blk.norm_bias);
        fn(blk.w_in);
        fn(blk.w_gate);
        fn(blk.b_gate);
        fn(blk.c_out);
        fn(blk.w_out);
    }
    fn(p.head_pred.w1);
    fn(p.head_pred.b1);
    fn(p.head_pred.w2);
    fn(p.head_pred.b2);
    fn(p.head_emb.w1);
    fn(p.head_emb.b1);
    fn(p.head_emb.w2);
    fn(p.head_emb.b2);
}

}  // namespace

Eigen::VectorXd pack_params(const ModelParams& params, const ModelConfig& cfg) {
    Eigen::VectorXd flat(param_count(cfg));
    std::ptrdiff_t off = 0;
    for_each_tensor(params, [&](const auto& t) {
        flat.segment(off, t.size()) =
            Eigen::Map<const Eigen::VectorXd>(t.data(), t.size());
        off += t.size();
    });
    return flat;
}

ModelParams unpack_params(const Eigen::VectorXd& flat, const ModelConfig& cfg) {
    if (flat.size() != param_count(cfg)) {
        throw std::invalid_argument("unpack_params: size mismatch");
    }
    ModelParams p = zero_params(cfg);
    std::ptrdiff_t off = 0;
    for_each_tensor(p, [&](auto& t) {
        Eigen::Map<Eigen::VectorXd>(t.data(), t.size()) =
            flat.segment(off, t.size());
        off += t.size();
    });
    return p;
}

ModelParams zero_params(const ModelConfig& cfg) {
    const int d = cfg.model_dim;
    const int e = cfg.inner_dim();
    ModelParams p;
    p.proj_w = Eigen::MatrixXd::Zero(d, cfg.input_dim);
    p.proj_b = Eigen::VectorXd::Zero(d);
    p.blocks.resize(cfg.n_blocks);
    for (auto& blk : p.blocks) {
        blk.norm_scale = Eigen::VectorXd::Zero(d);
        blk.norm_bias = Eigen::VectorXd::Zero(d);
        blk.w_in = Eigen::MatrixXd::Zero(2 * e, d);
        blk.w_gate = Eigen::MatrixXd::Zero(e, e);
        blk.b_gate = Eigen::VectorXd::Zero(e);
        blk.c_out = Eigen::VectorXd::Zero(e);
        blk.w_out = Eigen::MatrixXd::Zero(d, e);
    }
    p.head_pred.w1 = Eigen::MatrixXd::Zero(d, d);
    p.head_pred.b1 = Eigen::VectorXd::Zero(d);
    p.head_pred.w2 = Eigen::MatrixXd::Zero(4, d);
    p.head_pred.b2 = Eigen::VectorXd::Zero(4);
    p.head_emb.w1 = Eigen::MatrixXd::Zero(d, d);
    p.head_emb.b1 = Eigen::VectorXd::Zero(d);
    p.head_emb.w2 = Eigen::MatrixXd::Zero(cfg.embed_dim, d);
    p.head_emb.b2 = Eigen::VectorXd::Zero(cfg.embed_dim);
    return p;
}

}  // namespace ssmmot
