#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "ssmmot/geometry.hpp"
#include "ssmmot/kalman.hpp"
#include "ssmmot/rng.hpp"

using namespace ssmmot;

TEST_CASE("kf_init centers the measurement") {
    const KFState s = kf_init(BBox{0, 0, 10, 20});
    CHECK(s.mean(0) == doctest::Approx(5.0));
    CHECK(s.mean(1) == doctest::Approx(10.0));
    CHECK(s.mean(2) == doctest::Approx(0.5));
    CHECK(s.mean(3) == doctest::Approx(20.0));
    for (int i = 4; i < 8; ++i) CHECK(s.mean(i) == 0.0);

    CHECK((s.cov - s.cov.transpose()).norm() == 0.0);
    CHECK(s.cov.diagonal().minCoeff() > 0.0);

    const KFState again = kf_init(BBox{0, 0, 10, 20});
    CHECK(s.mean == again.mean);
    CHECK(s.cov == again.cov);
}

TEST_CASE("kf_predict propagates velocity and inflates covariance") {
    KFState s = kf_init(BBox{0, 0, 10, 10});
    s.mean(0) = 5.0;
    s.mean(4) = 2.0;  // cx velocity
    const KFState p = kf_predict(s);
    CHECK(p.mean(0) == doctest::Approx(7.0));
    CHECK(p.cov.trace() > s.cov.trace());

    // k sequential predicts move k*v
    KFState q = s;
    for (int k = 1; k <= 5; ++k) {
        q = kf_predict(q);
        CHECK(q.mean(0) == doctest::Approx(5.0 + 2.0 * k));
    }
}

TEST_CASE("kf_update with zero innovation keeps mean, shrinks covariance") {
    KFState s = kf_init(BBox{10, 10, 30, 60});
    s = kf_predict(s);
    const BBox z = kf_to_bbox(s);
    const KFState u = kf_update(s, z);
    CHECK((u.mean.head<4>() - s.mean.head<4>()).norm() == doctest::Approx(0.0));
    CHECK(u.cov.trace() < s.cov.trace());
}

TEST_CASE("kf velocity estimate converges on constant motion") {
    KFState s = kf_init(BBox{0, 0, 10, 10});
    // object moving +2 px/frame in x
    for (int f = 1; f <= 3; ++f) {
        s = kf_predict(s);
        s = kf_update(s, BBox{2.0 * f, 0, 10, 10});
    }
    CHECK(s.mean(4) >= 1.0);
    CHECK(s.mean(4) <= 3.0);
}

TEST_CASE("covariance stays symmetric PSD under long interleavings") {
    Rng rng(11);
    KFState s = kf_init(BBox{100, 100, 40, 80});
    double cx = 120.0, cy = 140.0;
    for (int step = 0; step < 1000; ++step) {
        s = kf_predict(s);
        if (rng.bernoulli(0.7)) {
            cx += rng.uniform(-4.0, 4.0);
            cy += rng.uniform(-4.0, 4.0);
            s = kf_update(s, BBox{cx, cy, 40 + rng.uniform(-2.0, 2.0),
                                  80 + rng.uniform(-2.0, 2.0)});
        }
        CHECK((s.cov - s.cov.transpose()).cwiseAbs().maxCoeff() < 1e-9);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 8, 8>> eig(s.cov);
        CHECK(eig.eigenvalues().minCoeff() > -1e-9);
    }
}

TEST_CASE("noiseless constant velocity converges after burn-in") {
    const double h = 50.0;
    KFState s = kf_init(BBox{0, 0, 25, h});
    double x = 0.0;
    double prev_err = 1e9;
    for (int f = 1; f <= 30; ++f) {
        x += 3.0;
        s = kf_predict(s);
        s = kf_update(s, BBox{x, 0, 25, h});
        if (f >= 5 && f % 5 == 0) {
            const BBox b = kf_to_bbox(kf_predict(s));
            const double err = std::abs(b.x - (x + 3.0));
            CHECK(err < prev_err);  // monotone decay past burn-in
            prev_err = err;
        }
    }
    const KFState pred = kf_predict(s);
    const BBox b = kf_to_bbox(pred);
    CHECK(std::abs(b.x - (x + 3.0)) < 1e-3 * h);
}

TEST_CASE("update then predict stays finite and deterministic") {
    KFState a = kf_init(BBox{5, 5, 10, 10});
    KFState b = kf_init(BBox{5, 5, 10, 10});
    for (int i = 0; i < 10; ++i) {
        a = kf_predict(kf_update(a, BBox{5.0 + i, 5, 10, 10}));
        b = kf_predict(kf_update(b, BBox{5.0 + i, 5, 10, 10}));
    }
    CHECK(a.mean == b.mean);
    CHECK(a.mean.allFinite());
    CHECK(a.cov.allFinite());
}
