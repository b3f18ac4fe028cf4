#include <doctest.h>

#include <cmath>

#include "ssmmot/errors.hpp"
#include "ssmmot/training.hpp"

using namespace ssmmot;

namespace {

ModelConfig tiny_cfg() {
    ModelConfig cfg;
    cfg.n_blocks = 2;
    cfg.model_dim = 8;
    cfg.expand_factor = 2;
    cfg.embed_dim = 8;
    cfg.max_len = 4;
    return cfg;
}

TrackletStore two_tracklet_store(std::uint64_t seed, int len = 12) {
    Rng rng(seed);
    TrackletStore store;
    for (int t = 0; t < 2; ++t) {
        Tracklet trk;
        trk.track_id = t + 1;
        trk.first_frame = 1;
        trk.img = ImageSize{640, 480};
        double cx = rng.uniform(0.3, 0.7), cy = rng.uniform(0.3, 0.7);
        const double w = rng.uniform(0.05, 0.2), h = rng.uniform(0.05, 0.2);
        for (int f = 0; f < len; ++f) {
            cx += rng.uniform(-0.02, 0.02);
            cy += rng.uniform(-0.02, 0.02);
            trk.boxes.push_back(NormBox{cx, cy, w, h});
        }
        store.tracklets.push_back(std::move(trk));
    }
    return store;
}

}  // namespace

TEST_CASE("loss_pred at the optimum is zero with zero gradient") {
    const NormBox b{0.4, 0.5, 0.1, 0.2};
    const auto [value, grad] = loss_pred(b, b);
    CHECK(value == 0.0);
    CHECK(grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("loss_pred on disjoint boxes") {
    // corner-form (0,0,1,1) vs (2,2,1,1): giou = -7/9, mse = (4+4)/4
    const NormBox pred{0.5, 0.5, 1.0, 1.0};
    const NormBox target{2.5, 2.5, 1.0, 1.0};
    const auto [value, grad] = loss_pred(pred, target);
    CHECK(value == doctest::Approx(1.0 + 7.0 / 9.0 + 2.0));
}

TEST_CASE("loss_pred gradient matches central differences") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const NormBox pred{rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8),
                           rng.uniform(0.05, 0.4), rng.uniform(0.05, 0.4)};
        const NormBox target{rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8),
                             rng.uniform(0.05, 0.4), rng.uniform(0.05, 0.4)};
        const auto [value, grad] = loss_pred(pred, target);
        const double h = 1e-5;
        for (int i = 0; i < 4; ++i) {
            auto shift = [&](double eps) {
                NormBox p = pred;
                (i == 0 ? p.cx : i == 1 ? p.cy : i == 2 ? p.w : p.h) += eps;
                return loss_pred(p, target).first;
            };
            const double fd = (shift(h) - shift(-h)) / (2.0 * h);
            CHECK(grad(i) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("loss_cos two-case formula") {
    Eigen::VectorXd f(3);
    f << 1, 0, 0;
    const CosLoss same = loss_cos(f, f, true);
    CHECK(same.value == 0.0);

    const CosLoss diff = loss_cos(f, f, false);
    CHECK(diff.value == 1.0);
    CHECK(diff.grad_i == f);

    Eigen::VectorXd g(3);
    g << 0, 1, 0;
    const CosLoss ortho = loss_cos(f, g, false);
    CHECK(ortho.value == 0.0);
    CHECK(ortho.grad_i.cwiseAbs().maxCoeff() == 0.0);
    CHECK(ortho.grad_j.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample_batch preconditions and determinism") {
    const ModelConfig cfg = tiny_cfg();
    TrackletStore one;
    one.tracklets.push_back(two_tracklet_store(1).tracklets[0]);
    Rng rng(2);
    CHECK_THROWS_AS(sample_batch(one, cfg, 4, rng), InsufficientData);

    const TrackletStore store = two_tracklet_store(3);
    Rng r1(99), r2(99);
    const auto b1 = sample_batch(store, cfg, 8, r1);
    const auto b2 = sample_batch(store, cfg, 8, r2);
    REQUIRE(b1.size() == b2.size());
    for (std::size_t i = 0; i < b1.size(); ++i) {
        CHECK(b1[i].same == b2[i].same);
        CHECK(b1[i].anchor.track_id == b2[i].anchor.track_id);
        for (int t = 0; t < cfg.max_len; ++t) {
            CHECK(b1[i].anchor.seq[t].cx == b2[i].anchor.seq[t].cx);
            CHECK(b1[i].anchor.mask[t] == b2[i].anchor.mask[t]);
        }
    }
}

TEST_CASE("sample_batch window shape and positive fraction") {
    const ModelConfig cfg = tiny_cfg();
    const TrackletStore store = two_tracklet_store(4, 16);
    Rng rng(5);
    long positives = 0, total = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto batch = sample_batch(store, cfg, 100, rng);
        for (const auto& pair : batch) {
            ++total;
            if (pair.same) ++positives;
            CHECK(pair.same == (pair.anchor.track_id == pair.paired.track_id));
            const auto hist = packed_history(pair.anchor);
            CHECK(hist.size() >= 2);
            CHECK(hist.size() <= std::size_t(cfg.max_len));
            CHECK(is_valid(pair.anchor.target));
        }
    }
    const double frac = double(positives) / double(total);
    CHECK(frac > 0.48);
    CHECK(frac < 0.52);
}

TEST_CASE("padding content is a no-op for loss and gradients") {
    const ModelConfig cfg = tiny_cfg();
    const ModelParams params = init_params(cfg, 41);
    const TrackletStore store = two_tracklet_store(42);
    Rng rng(43);
    auto batch = sample_batch(store, cfg, 3, rng);

    // Scramble the padding slots of every sample; results must not move.
    auto scrambled = batch;
    for (auto& pair : scrambled) {
        for (auto* s : {&pair.anchor, &pair.paired}) {
            for (std::size_t i = 0; i < s->mask.size(); ++i) {
                if (!s->mask[i]) s->seq[i] = NormBox{0.9, 0.9, 0.5, 0.5};
            }
        }
    }
    const auto [g1, r1] = backward(batch, params, cfg);
    const auto [g2, r2] = backward(scrambled, params, cfg);
    CHECK(r1.loss_total == doctest::Approx(r2.loss_total).epsilon(1e-12));
    CHECK((pack_params(g1, cfg) - pack_params(g2, cfg)).cwiseAbs().maxCoeff() <
          1e-9);

    // And the padded sample resolves to exactly its real-frame window.
    const auto& sample = batch[0].anchor;
    const auto packed = packed_history(sample);
    int real = 0;
    for (bool m : sample.mask) real += m ? 1 : 0;
    REQUIRE(int(packed.size()) == real);
    for (int i = 0; i < real; ++i) {
        CHECK(packed[i].cx == sample.seq[sample.seq.size() - real + i].cx);
    }
}

TEST_CASE("backward: zero prediction head at the target leaves its gradient zero") {
    const ModelConfig cfg = tiny_cfg();
    ModelParams params = init_params(cfg, 51);
    params.head_pred.w1.setZero();
    params.head_pred.b1.setZero();
    params.head_pred.w2.setZero();
    params.head_pred.b2.setZero();

    // Positive pair whose target equals the last window box.
    Tracklet trk;
    trk.track_id = 1;
    trk.img = ImageSize{100, 100};
    const NormBox fixed{0.5, 0.5, 0.2, 0.2};
    for (int i = 0; i < 4; ++i) trk.boxes.push_back(fixed);

    SamplePair pair;
    pair.anchor = make_sample({fixed, fixed, fixed}, fixed, 1, trk.img, cfg);
    pair.paired = pair.anchor;
    pair.same = true;

    const auto [grads, report] = backward({pair}, params, cfg);
    CHECK(report.loss_giou == 0.0);
    CHECK(report.loss_mse == 0.0);
    CHECK(grads.head_pred.w1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(grads.head_pred.w2.cwiseAbs().maxCoeff() == 0.0);
    CHECK(grads.head_pred.b2.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("backward: duplicating the batch leaves mean gradients unchanged") {
    const ModelConfig cfg = tiny_cfg();
    const ModelParams params = init_params(cfg, 52);
    const TrackletStore store = two_tracklet_store(53);
    Rng rng(54);
    const auto batch = sample_batch(store, cfg, 4, rng);
    auto doubled = batch;
    doubled.insert(doubled.end(), batch.begin(), batch.end());

    const auto [g1, r1] = backward(batch, params, cfg);
    const auto [g2, r2] = backward(doubled, params, cfg);
    CHECK(std::abs(r1.loss_total - r2.loss_total) < 1e-12);
    CHECK((pack_params(g1, cfg) - pack_params(g2, cfg)).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("backward flags non-finite losses") {
    const ModelConfig cfg = tiny_cfg();
    ModelParams params = init_params(cfg, 55);
    params.head_pred.b2.setConstant(1e308);
    const TrackletStore store = two_tracklet_store(56);
    Rng rng(57);
    const auto batch = sample_batch(store, cfg, 2, rng);
    CHECK_THROWS_AS(backward(batch, params, cfg), NonFiniteLoss);
}

TEST_CASE("loss report decomposition") {
    const ModelConfig cfg = tiny_cfg();
    const ModelParams params = init_params(cfg, 58);
    const TrackletStore store = two_tracklet_store(59);
    Rng rng(60);
    const auto batch = sample_batch(store, cfg, 6, rng);
    const LossReport rep = batch_loss(batch, params, cfg);
    CHECK(rep.loss_total ==
          doctest::Approx(rep.loss_giou + rep.loss_mse + rep.loss_cos)
              .epsilon(1e-12));
    CHECK(rep.loss_giou >= 0.0);
    CHECK(rep.loss_giou < 2.0);
    CHECK(rep.loss_mse >= 0.0);
    CHECK(rep.loss_cos >= 0.0);
    CHECK(rep.loss_cos <= 2.0);
}

TEST_CASE("adam_step basics") {
    const ModelConfig cfg = tiny_cfg();
    ModelParams params = init_params(cfg, 61);
    const Eigen::VectorXd before = pack_params(params, cfg);

    AdamState state = adam_init(cfg, 1e-3);
    const ModelParams zero_grads = zero_params(cfg);
    adam_step(params, zero_grads, cfg, state);
    CHECK(state.step == 1);
    CHECK(pack_params(params, cfg) == before);

    // first step from a fresh state: |delta| = lr * |g| / (|g| + eps)
    AdamState fresh = adam_init(cfg, 1e-3);
    ModelParams grads = zero_params(cfg);
    grads.proj_b.setConstant(0.25);
    adam_step(params, grads, cfg, fresh);
    const Eigen::VectorXd after = pack_params(params, cfg);
    const double delta = (after - before).cwiseAbs().maxCoeff();
    CHECK(delta == doctest::Approx(1e-3 * 0.25 / (0.25 + 1e-8)).epsilon(1e-6));
    CHECK(delta <= 1e-3 * (1.0 + 1e-6));
}

TEST_CASE("adam trajectories are deterministic") {
    const ModelConfig cfg = tiny_cfg();
    const TrackletStore store = two_tracklet_store(62);
    TrainOptions opts;
    opts.epochs = 3;
    opts.batch = 4;
    opts.seed = 7;
    const TrainResult a = train(store, cfg, opts);
    const TrainResult b = train(store, cfg, opts);
    CHECK(pack_params(a.params, cfg) == pack_params(b.params, cfg));
    REQUIRE(a.history.size() == 3);
    CHECK(a.history[0].loss_total == b.history[0].loss_total);
}

TEST_CASE("clip_gradients caps the global norm") {
    const ModelConfig cfg = tiny_cfg();
    ModelParams grads = zero_params(cfg);
    grads.proj_w.setConstant(10.0);
    const double before = pack_params(grads, cfg).norm();
    CHECK(before > 5.0);
    clip_gradients(grads, cfg, 5.0);
    CHECK(pack_params(grads, cfg).norm() == doctest::Approx(5.0));
}

TEST_CASE("train with zero epochs returns initial params") {
    const ModelConfig cfg = tiny_cfg();
    const TrackletStore store = two_tracklet_store(63);
    TrainOptions opts;
    opts.epochs = 0;
    opts.seed = 11;
    const TrainResult res = train(store, cfg, opts);
    CHECK(res.history.empty());
    CHECK(pack_params(res.params, cfg) ==
          pack_params(init_params(cfg, Rng::derive_seed(11, 0)), cfg));
}

TEST_CASE("training learns constant-velocity motion") {
    Rng rng(71);
    TrackletStore store;
    const ImageSize img{800, 600};
    for (int t = 0; t < 24; ++t) {
        Tracklet trk;
        trk.track_id = t + 1;
        trk.img = img;
        double cx = rng.uniform(0.25, 0.75), cy = rng.uniform(0.25, 0.75);
        const double vx = rng.uniform(-0.004, 0.004), vy = rng.uniform(-0.004, 0.004);
        const double w = rng.uniform(0.1, 0.2), h = rng.uniform(0.1, 0.2);
        for (int f = 0; f < 50; ++f) {
            cx += vx;
            cy += vy;
            trk.boxes.push_back(NormBox{cx, cy, w, h});
        }
        store.tracklets.push_back(std::move(trk));
    }

    ModelConfig cfg;
    cfg.model_dim = 32;
    cfg.embed_dim = 16;
    cfg.max_len = 8;

    TrainOptions opts;
    opts.epochs = 200;
    opts.batch = 32;
    opts.lr = 1e-3;
    opts.seed = 5;
    const TrainResult res = train(store, cfg, opts);
    const double first = res.history.front().loss_giou + res.history.front().loss_mse;
    const double last = res.history.back().loss_giou + res.history.back().loss_mse;
    CHECK(last < 0.1 * first);
}

TEST_CASE("grad_check: analytic BPTT matches finite differences") {
    const ModelConfig cfg = tiny_cfg();
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const GradCheckReport report = grad_check(cfg, seed);
        INFO("seed " << seed << " max rel error " << report.max_rel_error);
        CHECK(report.max_rel_error < 1e-4);
    }
}

TEST_CASE("grad_check detects corrupted gradients") {
    const ModelConfig cfg = tiny_cfg();
    const ModelParams params = init_params(cfg, 81);
    const TrackletStore store = two_tracklet_store(82);
    Rng rng(83);
    const auto batch = sample_batch(store, cfg, 2, rng);
    const auto [grads, report] = backward(batch, params, cfg);
    Eigen::VectorXd analytic = pack_params(grads, cfg);
    const Eigen::VectorXd numeric = finite_difference_gradients(batch, params, cfg);

    analytic(analytic.size() / 2) += 0.1 * (1.0 + std::abs(analytic(analytic.size() / 2)));
    const GradCheckReport bad = compare_gradients(analytic, numeric, cfg);
    CHECK(bad.max_rel_error > 1e-2);
}
