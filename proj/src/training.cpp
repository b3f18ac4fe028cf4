// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "ssmmot/errors.hpp"
#include "ssmmot/checkpoint.hpp"
#include "ssmmot/mot_io.hpp"

namespace ssmmot {

namespace {

struct PredLossParts {
    double giou_term = 0.0;
    double mse_term = 0.0;
    Eigen::Vector4d grad = Eigen::Vector4d::Zero();
};

// 1 - GIoU plus coordinate MSE in center form, with the analytic gradient
// w.r.t. the predicted (cx, cy, w, h). Comparisons are strict so that on
// coordinate ties the derivative routes to the (constant) target box; at
// pred == target the gradient is exactly zero, the subgradient of the
// minimum.
PredLossParts pred_loss_parts(const NormBox& pred, const NormBox& target) {
    if (pred.cx == target.cx && pred.cy == target.cy && pred.w == target.w &&
        pred.h == target.h) {
        return PredLossParts{};  // global minimum; 0 is the subgradient
    }
    const double px1 = pred.cx - 0.5 * pred.w, px2 = pred.cx + 0.5 * pred.w;
    const double py1 = pred.cy - 0.5 * pred.h, py2 = pred.cy + 0.5 * pred.h;
    const double tx1 = target.cx - 0.5 * target.w, tx2 = target.cx + 0.5 * target.w;
    const double ty1 = target.cy - 0.5 * target.h, ty2 = target.cy + 0.5 * target.h;

    const double ix1 = std::max(px1, tx1), ix2 = std::min(px2, tx2);
    const double iy1 = std::max(py1, ty1), iy2 = std::min(py2, ty2);
    const double iw = std::max(0.0, ix2 - ix1), ih = std::max(0.0, iy2 - iy1);
    const double inter = iw * ih;
    const double area_p = pred.w * pred.h;
    const double uni = area_p + target.w * target.h - inter;

    const double ex1 = std::min(px1, tx1), ex2 = std::max(px2, tx2);
    const double ey1 = std::min(py1, ty1), ey2 = std::max(py2, ty2);
    const double ew = ex2 - ex1, eh = ey2 - ey1;
    const double enc = ew * eh;

    const double giou_v = inter / uni - (enc - uni) / enc;

    // d inter / d pred corners
    const bool wpos = (ix2 - ix1) > 0.0 && (iy2 - iy1) > 0.0;
    const double di_px1 = wpos && px1 > tx1 ? -ih : 0.0;
    const double di_px2 = wpos && px2 < tx2 ? ih : 0.0;
    const double di_py1 = wpos && py1 > ty1 ? -iw : 0.0;
    const double di_py2 = wpos && py2 < ty2 ? iw : 0.0;

    // d area_p / d corners; union follows
    const double dap_px1 = -pred.h, dap_px2 = pred.h;
    const double dap_py1 = -pred.w, dap_py2 = pred.w;
    const double du_px1 = dap_px1 - di_px1, du_px2 = dap_px2 - di_px2;
    const double du_py1 = dap_py1 - di_py1, du_py2 = dap_py2 - di_py2;

    // d enclose / d corners
    const double de_px1 = px1 < tx1 ? -eh : 0.0;
    const double de_px2 = px2 > tx2 ? eh : 0.0;
    const double de_py1 = py1 < ty1 ? -ew : 0.0;
    const double de_py2 = py2 > ty2 ? ew : 0.0;

    // giou = inter/uni - 1 + uni/enc
    const double inv_u = 1.0 / uni, inv_e = 1.0 / enc;
    auto d_giou = [&](double di, double du, double de) {
        return di * inv_u - inter * du * inv_u * inv_u + du * inv_e -
               uni * de * inv_e * inv_e;
    };
    const double dg_px1 = d_giou(di_px1, du_px1, de_px1);
    const double dg_px2 = d_giou(di_px2, du_px2, de_px2);
    const double dg_py1 = d_giou(di_py1, du_py1, de_py1);
    const double dg_py2 = d_giou(di_py2, du_py2, de_py2);

    PredLossParts out;
    out.giou_term = 1.0 - giou_v;
    // Corners to center form: x1 = cx - w/2, x2 = cx + w/2. Loss is 1-giou,
    // hence the sign flip.
    out.grad(0) = -(dg_px1 + dg_px2);
    out.grad(1) = -(dg_py1 + dg_py2);
    out.grad(2) = -0.5 * (dg_px2 - dg_px1);
    out.grad(3) = -0.5 * (dg_py2 - dg_py1);

    const Eigen::Vector4d diff(pred.cx - target.cx, pred.cy - target.cy,
                               pred.w - target.w, pred.h - target.h);
    out.mse_term = diff.squaredNorm() / 4.0;
    out.grad += 0.5 * diff;
    return out;
}

// Reverse pass for one sample. d_pred_box / d_embedding are the loss
// gradients w.r.t. the clamped predicted box and the unit embedding.
void sample_backward(const ForwardCache& cache, const ModelParams& params,
                     const Eigen::Vector4d& d_pred_box,
                     const Eigen::VectorXd& d_embedding, ModelParams& grads) {
    const Eigen::Index d = cache.last.size();
    const Eigen::Index e = params.blocks.empty() ? 0 : params.blocks[0].b_gate.size();
    const Eigen::Index t_len = cache.inputs.cols();

    // pred_box = last_box + delta, with the w/h floor.
    Eigen::Vector4d d_delta = d_pred_box;
    if (cache.clamped_w) d_delta(2) = 0.0;
    if (cache.clamped_h) d_delta(3) = 0.0;

    Eigen::VectorXd d_last = Eigen::VectorXd::Zero(d);

    auto mlp_backward = [&](const Mlp& mlp, Mlp& g, const Eigen::VectorXd& pre,
                            const Eigen::VectorXd& hidden,
                            const Eigen::VectorXd& d_out) {
        g.w2 += d_out * hidden.transpose();
        g.b2 += d_out;
        const Eigen::VectorXd d_hidden = mlp.w2.transpose() * d_out;
        Eigen::VectorXd d_pre(pre.size());
        for (Eigen::Index i = 0; i < pre.size(); ++i) {
            d_pre(i) = d_hidden(i) * silu_grad(pre(i));
        }
        g.w1 += d_pre * cache.last.transpose();
        g.b1 += d_pre;
        d_last += mlp.w1.transpose() * d_pre;
    };

    mlp_backward(params.head_pred, grads.head_pred, cache.pred_pre,
                 cache.pred_hidden, d_delta);

    // Unit normalization: d_raw = (I - f f^T) d_f / norm. The basis-vector
    // fallback is constant, so it passes no gradient.
    if (!cache.emb_fallback) {
        const Eigen::VectorXd& f = cache.embedding;
        const Eigen::VectorXd d_raw =
            (d_embedding - f * f.dot(d_embedding)) / cache.emb_norm;
        mlp_backward(params.head_emb, grads.head_emb, cache.emb_pre,
                     cache.emb_hidden, d_raw);
    }

    Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(d, t_len);
    d_out.col(t_len - 1) = d_last;

    // Workspaces reused across blocks and timesteps.
    Eigen::MatrixXd d_r(e, t_len), d_y(e, t_len), d_branch(2 * e, t_len);
    Eigen::MatrixXd d_z_all(e, t_len), d_u(d, t_len), u(d, t_len);
    Eigen::VectorXd dh(e), d_g(e), d_xhat(d);

    for (int k = static_cast<int>(params.blocks.size()) - 1; k >= 0; --k) {
        const BlockCache& bc = cache.blocks[k];
        const BlockParams& bp = params.blocks[k];
        BlockParams& bg = grads.blocks[k];
        const auto a = bc.branch_in.topRows(e);

        Eigen::MatrixXd d_in = d_out;  // residual path

        bg.w_out.noalias() += d_out * bc.scan_out.cwiseProduct(bc.silu_gate).transpose();
        d_r.noalias() = bp.w_out.transpose() * d_out;
        d_y = d_r.cwiseProduct(bc.silu_gate);
        // gate-branch silu derivative, written straight into d_branch
        for (Eigen::Index t = 0; t < t_len; ++t) {
            for (Eigen::Index i = 0; i < e; ++i) {
                d_branch(e + i, t) =
                    d_r(i, t) * bc.scan_out(i, t) * silu_grad(bc.branch_in(e + i, t));
            }
        }

        dh.setZero();
        for (Eigen::Index t = t_len - 1; t >= 0; --t) {
            dh.array() += bp.c_out.array() * d_y.col(t).array();
            bg.c_out.array() += bc.hidden.col(t).array() * d_y.col(t).array();
            const auto g_t = bc.gate.col(t).array();
            if (t > 0) {
                d_g.array() = dh.array() * (a.col(t).array() - bc.hidden.col(t - 1).array());
            } else {
                d_g.array() = dh.array() * a.col(t).array();
            }
            d_z_all.col(t).array() = d_g.array() * g_t * (1.0 - g_t);
            d_branch.col(t).head(e).array() = dh.array() * g_t;
            dh.array() *= 1.0 - g_t;
        }
        bg.w_gate.noalias() += d_z_all * a.transpose();
        bg.b_gate.noalias() += d_z_all.rowwise().sum();
        d_branch.topRows(e).noalias() += bp.w_gate.transpose() * d_z_all;

        for (Eigen::Index t = 0; t < t_len; ++t) {
            u.col(t) = bp.norm_scale.cwiseProduct(bc.normed.col(t)) + bp.norm_bias;
        }
        bg.w_in.noalias() += d_branch * u.transpose();
        d_u.noalias() = bp.w_in.transpose() * d_branch;

        for (Eigen::Index t = 0; t < t_len; ++t) {
            bg.norm_scale.array() += d_u.col(t).array() * bc.normed.col(t).array();
            bg.norm_bias += d_u.col(t);
            d_xhat.array() = d_u.col(t).array() * bp.norm_scale.array();
            const double m1 = d_xhat.mean();
            const double m2 = (d_xhat.array() * bc.normed.col(t).array()).mean();
            d_in.col(t).array() +=
                bc.rstd(t) * (d_xhat.array() - m1 - bc.normed.col(t).array() * m2);
        }
        d_out.swap(d_in);
    }

    grads.proj_w += d_out * cache.inputs.transpose();
    grads.proj_b += d_out.rowwise().sum();
}

// Shared loss/gradient loop; gradients are skipped when grads is null so the
// finite-difference path evaluates the identical arithmetic.
LossReport process_batch(const std::vector<SamplePair>& batch,
                         const ModelParams& params, const ModelConfig& cfg,
                         ModelParams* grads) {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    const double n_pred = 2.0 * static_cast<double>(batch.size());
    const double n_cos = static_cast<double>(batch.size());

    double giou_sum = 0.0, mse_sum = 0.0, cos_sum = 0.0;
    for (const auto& entry : batch) {
        ForwardCache fc_a, fc_p;
        const ForwardResult res_a =
            model_forward(packed_history(entry.anchor), params, cfg, &fc_a);
        const ForwardResult res_p =
            model_forward(packed_history(entry.paired), params, cfg, &fc_p);

        const PredLossParts lp_a = pred_loss_parts(res_a.pred_box, entry.anchor.target);
        const PredLossParts lp_p = pred_loss_parts(res_p.pred_box, entry.paired.target);
        giou_sum += lp_a.giou_term + lp_p.giou_term;
        mse_sum += lp_a.mse_term + lp_p.mse_term;

        const CosLoss lc = loss_cos(res_a.embedding, res_p.embedding, entry.same);
        cos_sum += lc.value;

        if (grads) {
            sample_backward(fc_a, params, lp_a.grad / n_pred, lc.grad_i / n_cos,
                            *grads);
            sample_backward(fc_p, params, lp_p.grad / n_pred, lc.grad_j / n_cos,
                            *grads);
        }
    }

    LossReport report;
    report.loss_giou = giou_sum / n_pred;
    report.loss_mse = mse_sum / n_pred;
    report.loss_cos = cos_sum / n_cos;
    report.loss_total = report.loss_giou + report.loss_mse + report.loss_cos;
    if (!std::isfinite(report.loss_total)) {
        throw NonFiniteLoss("batch loss is not finite");
    }
    return report;
}

}  // namespace

std::vector<NormBox> packed_history(const TrainSample& sample) {
    if (sample.seq.size() != sample.mask.size()) {
        throw std::invalid_argument("sample seq/mask size mismatch");
    }
    std::size_t first = sample.mask.size();
    for (std::size_t i = 0; i < sample.mask.size(); ++i) {
        if (sample.mask[i]) {
            first = i;
            break;
        }
    }
    for (std::size_t i = first; i < sample.mask.size(); ++i) {
        if (!sample.mask[i]) {
            throw std::invalid_argument("mask not contiguous at the right end");
        }
    }
    if (sample.mask.size() - first < 2) {
        throw std::invalid_argument("sample has fewer than 2 real frames");
    }
    return std::vector<NormBox>(sample.seq.begin() + first, sample.seq.end());
}

TrainSample make_sample(const std::vector<NormBox>& window, const NormBox& target,
                        int track_id, const ImageSize& img, const ModelConfig& cfg) {
    const int n = cfg.max_len;
    const int len = static_cast<int>(window.size());
    if (len < 2 || len > n) {
        throw std::invalid_argument("make_sample: window length out of range");
    }
    TrainSample s;
    s.seq.assign(n, window.front());
    s.mask.assign(n, false);
    for (int i = 0; i < len; ++i) {
        s.seq[n - len + i] = window[i];
        s.mask[n - len + i] = true;
    }
    s.target = target;
    s.track_id = track_id;
    s.img = img;
    return s;
}

TrackletStore load_tracklet_store(const std::vector<std::string>& seq_dirs) {
    TrackletStore store;
    int next_id = 1;
    for (const auto& dir : seq_dirs) {
        const SeqInfo info = read_seqinfo(dir);
        const auto records = parse_mot(dir + "/gt.txt");
        std::map<int, std::vector<MotFrameRecord>> by_id;
        for (const auto& rec : records) by_id[rec.id].push_back(rec);
        for (auto& [id, rows] : by_id) {
            std::sort(rows.begin(), rows.end(),
                      [](const MotFrameRecord& a, const MotFrameRecord& b) {
                          return a.frame < b.frame;
                      });
            // Split at frame gaps; the model consumes contiguous windows.
            std::size_t start = 0;
            for (std::size_t i = 1; i <= rows.size(); ++i) {
                if (i == rows.size() || rows[i].frame != rows[i - 1].frame + 1) {
                    if (i - start >= 3) {
                        Tracklet trk;
                        trk.track_id = next_id++;
                        trk.first_frame = rows[start].frame;
                        trk.img = info.image;
                        for (std::size_t j = start; j < i; ++j) {
                            trk.boxes.push_back(to_norm(rows[j].bbox, info.image));
                        }
                        store.tracklets.push_back(std::move(trk));
                    }
                    start = i;
                }
            }
        }
    }
    return store;
}

std::vector<SamplePair> sample_batch(const TrackletStore& store,
                                     const ModelConfig& cfg, int batch, Rng& rng) {
    std::vector<int> usable;
    for (std::size_t i = 0; i < store.tracklets.size(); ++i) {
        if (store.tracklets[i].boxes.size() >= 3) usable.push_back(static_cast<int>(i));
    }
    if (usable.size() < 2) {
        throw InsufficientData("need at least 2 tracklets of length >= 3");
    }

    auto draw_window = [&](const Tracklet& trk) {
        const int len = static_cast<int>(trk.boxes.size());
        const int max_w = std::min(cfg.max_len, len - 1);
        const int w = static_cast<int>(rng.uniform_int(2, max_w));
        const int start = static_cast<int>(rng.uniform_int(0, len - 1 - w));
        const std::vector<NormBox> window(trk.boxes.begin() + start,
                                          trk.boxes.begin() + start + w);
        return make_sample(window, trk.boxes[start + w], trk.track_id, trk.img, cfg);
    };

    std::vector<SamplePair> out;
    out.reserve(batch);
    for (int b = 0; b < batch; ++b) {
        const int ai = static_cast<int>(rng.uniform_int(0, usable.size() - 1));
        SamplePair pair;
        pair.anchor = draw_window(store.tracklets[usable[ai]]);
        pair.same = rng.bernoulli(0.5);
        int pi = ai;
        if (!pair.same) {
            const int r = static_cast<int>(rng.uniform_int(0, usable.size() - 2));
            pi = r >= ai ? r + 1 : r;
        }
        pair.paired = draw_window(store.tracklets[usable[pi]]);
        out.push_back(std::move(pair));
    }
    return out;
}

std::pair<double, Eigen::Vector4d> loss_pred(const NormBox& pred,
                                             const NormBox& target) {
    const PredLossParts parts = pred_loss_parts(pred, target);
    return {parts.giou_term + parts.mse_term, parts.grad};
}

CosLoss loss_cos(const Eigen::VectorXd& f_i, const Eigen::VectorXd& f_j, bool same) {
    CosLoss out;
    const double c = f_i.dot(f_j);
    if (same) {
        out.value = 1.0 - c;
        out.grad_i = -f_j;
        out.grad_j = -f_i;
    } else if (c > 0.0) {
        out.value = c;
        out.grad_i = f_j;
        out.grad_j = f_i;
    } else {
        out.value = 0.0;
        out.grad_i = Eigen::VectorXd::Zero(f_i.size());
        out.grad_j = Eigen::VectorXd::Zero(f_j.size());
    }
    return out;
}

std::pair<ModelParams, LossReport> backward(const std::vector<SamplePair>& batch,
                                            const ModelParams& params,
                                            const ModelConfig& cfg) {
    ModelParams grads = zero_params(cfg);
    const LossReport report = process_batch(batch, params, cfg, &grads);
    return {std::move(grads), report};
}

LossReport batch_loss(const std::vector<SamplePair>& batch,
                      const ModelParams& params, const ModelConfig& cfg) {
    return process_batch(batch, params, cfg, nullptr);
}

AdamState adam_init(const ModelConfig& cfg, double lr) {
    AdamState s;
    s.m = Eigen::VectorXd::Zero(param_count(cfg));
    s.v = Eigen::VectorXd::Zero(param_count(cfg));
    s.lr = lr;
    return s;
}

void adam_step(ModelParams& params, const ModelParams& grads,
               const ModelConfig& cfg, AdamState& state) {
    Eigen::VectorXd p = pack_params(params, cfg);
    const Eigen::VectorXd g = pack_params(grads, cfg);
    if (p.size() != state.m.size()) {
        throw std::invalid_argument("adam_step: state size mismatch");
    }
    state.step += 1;
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * g;
    state.v = state.beta2 * state.v.array().matrix() +
              (1.0 - state.beta2) * g.cwiseProduct(g);
    const double bc1 = 1.0 - std::pow(state.beta1, double(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, double(state.step));
    const Eigen::ArrayXd m_hat = state.m.array() / bc1;
    const Eigen::ArrayXd v_hat = state.v.array() / bc2;
    p.array() -= state.lr * m_hat / (v_hat.sqrt() + state.eps);
    params = unpack_params(p, cfg);
}

double clip_gradients(ModelParams& grads, const ModelConfig& cfg, double max_norm) {
    Eigen::VectorXd g = pack_params(grads, cfg);
    const double norm = g.norm();
    if (norm > max_norm && norm > 0.0) {
        g *= max_norm / norm;
        grads = unpack_params(g, cfg);
    }
    return norm;
}

TrainResult train(const TrackletStore& store, const ModelConfig& cfg,
                  const TrainOptions& opts) {
    TrainResult result;
    result.params = init_params(cfg, Rng::derive_seed(opts.seed, 0));
    Rng rng(Rng::derive_seed(opts.seed, 1));
    AdamState adam = adam_init(cfg, opts.lr);

    // One epoch visits every non-overlapping window position once in
    // expectation.
    long window_count = 0;
    for (const auto& t : store.tracklets) {
        if (t.boxes.size() < 3) continue;
        const long targets = static_cast<long>(t.boxes.size()) - 1;
        window_count += std::max<long>(1, (targets + cfg.max_len - 1) / cfg.max_len);
    }
    const int steps_per_epoch = static_cast<int>(
        std::max<long>(1, (window_count + opts.batch - 1) / std::max(1, opts.batch)));

    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        LossReport epoch_mean;
        for (int step = 0; step < steps_per_epoch; ++step) {
            const auto batch = sample_batch(store, cfg, opts.batch, rng);
            try {
                auto [grads, report] = backward(batch, result.params, cfg);
                clip_gradients(grads, cfg, opts.clip_norm);
                adam_step(result.params, grads, cfg, adam);
                epoch_mean.loss_giou += report.loss_giou;
                epoch_mean.loss_mse += report.loss_mse;
                epoch_mean.loss_cos += report.loss_cos;
            } catch (const NonFiniteLoss& e) {
                throw NonFiniteLoss(std::string(e.what()) + " (epoch " +
                                    std::to_string(epoch + 1) + ")");
            }
        }
        epoch_mean.loss_giou /= steps_per_epoch;
        epoch_mean.loss_mse /= steps_per_epoch;
        epoch_mean.loss_cos /= steps_per_epoch;
        epoch_mean.loss_total =
            epoch_mean.loss_giou + epoch_mean.loss_mse + epoch_mean.loss_cos;
        result.history.push_back(epoch_mean);
    }

    if (!opts.checkpoint_path.empty()) {
        save_checkpoint(opts.checkpoint_path, result.params, cfg);
    }
    if (!opts.loss_csv_path.empty()) {
        std::ofstream csv(opts.loss_csv_path, std::ios::binary);
        if (!csv) {
            throw std::runtime_error("train: cannot open " + opts.loss_csv_path);
        }
        csv << "epoch,loss_giou,loss_mse,loss_cos,loss_total\n";
        for (std::size_t i = 0; i < result.history.size(); ++i) {
            const auto& r = result.history[i];
            csv << (i + 1) << ',' << format_shortest(r.loss_giou) << ','
                << format_shortest(r.loss_mse) << ',' << format_shortest(r.loss_cos)
                << ',' << format_shortest(r.loss_total) << "\n";
        }
    }
    return result;
}

Eigen::VectorXd finite_difference_gradients(const std::vector<SamplePair>& batch,
                                            const ModelParams& params,
                                            const ModelConfig& cfg, double h) {
    Eigen::VectorXd flat = pack_params(params, cfg);
    Eigen::VectorXd numeric(flat.size());
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
        const double orig = flat(i);
        flat(i) = orig + h;
        const double up = batch_loss(batch, unpack_params(flat, cfg), cfg).loss_total;
        flat(i) = orig - h;
        const double down = batch_loss(batch, unpack_params(flat, cfg), cfg).loss_total;
        flat(i) = orig;
        numeric(i) = (up - down) / (2.0 * h);
    }
    return numeric;
}

GradCheckReport compare_gradients(const Eigen::VectorXd& analytic,
                                  const Eigen::VectorXd& numeric,
                                  const ModelConfig& cfg) {
    GradCheckReport report;
    const auto specs = tensor_specs(cfg);
    for (const auto& spec : specs) {
        double tensor_max = 0.0;
        for (int i = 0; i < spec.size(); ++i) {
            const double a = analytic(spec.offset + i);
            const double n = numeric(spec.offset + i);
            const double denom = std::max({std::abs(a), std::abs(n), 1e-5});
            tensor_max = std::max(tensor_max, std::abs(a - n) / denom);
        }
        report.per_tensor.emplace_back(spec.name, tensor_max);
        report.max_rel_error = std::max(report.max_rel_error, tensor_max);
    }
    return report;
}

GradCheckReport grad_check(const ModelConfig& cfg, std::uint64_t seed) {
    // Small random-walk tracklets; smooth enough that finite differences stay
    // away from the loss kinks.
    Rng rng(Rng::derive_seed(seed, 7));
    TrackletStore store;
    const ImageSize img{640, 480};
    for (int t = 0; t < 2; ++t) {
        Tracklet trk;
        trk.track_id = t + 1;
        trk.first_frame = 1;
        trk.img = img;
        double cx = rng.uniform(0.3, 0.7), cy = rng.uniform(0.3, 0.7);
        const double w = rng.uniform(0.05, 0.2), hgt = rng.uniform(0.05, 0.2);
        for (int f = 0; f < cfg.max_len + 4; ++f) {
            cx += rng.uniform(-0.02, 0.02);
            cy += rng.uniform(-0.02, 0.02);
            trk.boxes.push_back(NormBox{cx, cy, w, hgt});
        }
        store.tracklets.push_back(std::move(trk));
    }

    const ModelParams params = init_params(cfg, seed);
    const auto batch = sample_batch(store, cfg, 2, rng);
    const auto [grads, report] = backward(batch, params, cfg);
    const Eigen::VectorXd analytic = pack_params(grads, cfg);
    const Eigen::VectorXd numeric = finite_difference_gradients(batch, params, cfg);
    return compare_gradients(analytic, numeric, cfg);
}

}  // namespace ssmmot
