#include <doctest.h>

#include "ssmmot/geometry.hpp"
#include "ssmmot/rng.hpp"

using namespace ssmmot;

namespace {

BBox random_box(Rng& rng) {
    return BBox{rng.uniform(-50.0, 150.0), rng.uniform(-50.0, 150.0),
                rng.uniform(1.0, 80.0), rng.uniform(1.0, 80.0)};
}

}  // namespace

TEST_CASE("iou basics") {
    const BBox a{0, 0, 2, 2};
    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(iou(BBox{0, 0, 1, 1}, BBox{5, 5, 1, 1}) == doctest::Approx(0.0));
    // intersection 1, union 7
    CHECK(iou(BBox{0, 0, 2, 2}, BBox{1, 1, 2, 2}) == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("giou basics") {
    const BBox a{3, 4, 5, 6};
    CHECK(giou(a, a) == doctest::Approx(1.0));
    // disjoint: enclosing 3x3 = 9, union 2
    CHECK(giou(BBox{0, 0, 1, 1}, BBox{2, 2, 1, 1}) == doctest::Approx(-7.0 / 9.0));
    // overlap 1/7 case: enclosing 9, union 7
    CHECK(giou(BBox{0, 0, 2, 2}, BBox{1, 1, 2, 2}) ==
          doctest::Approx(1.0 / 7.0 - 2.0 / 9.0));
}

TEST_CASE("iou/giou properties over random boxes") {
    Rng rng(42);
    for (int i = 0; i < 500; ++i) {
        const BBox a = random_box(rng), b = random_box(rng);
        const double v = iou(a, b);
        const double g = giou(a, b);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v == doctest::Approx(iou(b, a)));
        CHECK(g <= v + 1e-12);
        CHECK(g > -1.0);

        // translation invariance
        const double dx = rng.uniform(-100.0, 100.0);
        const double dy = rng.uniform(-100.0, 100.0);
        const BBox as{a.x + dx, a.y + dy, a.w, a.h};
        const BBox bs{b.x + dx, b.y + dy, b.w, b.h};
        CHECK(iou(as, bs) == doctest::Approx(v).epsilon(1e-9));
        CHECK(giou(as, bs) == doctest::Approx(g).epsilon(1e-9));
    }
}

TEST_CASE("norm round trip") {
    const ImageSize img{100, 100};
    const NormBox n = to_norm(BBox{0, 0, 10, 10}, img);
    CHECK(n.cx == doctest::Approx(0.05));
    CHECK(n.cy == doctest::Approx(0.05));
    CHECK(n.w == doctest::Approx(0.1));
    CHECK(n.h == doctest::Approx(0.1));

    const NormBox n2 = to_norm(BBox{50, 50, 100, 100}, ImageSize{100, 200});
    CHECK(n2.cx == doctest::Approx(1.0));
    CHECK(n2.cy == doctest::Approx(0.5));
    CHECK(n2.w == doctest::Approx(1.0));
    CHECK(n2.h == doctest::Approx(0.5));

    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const ImageSize im{static_cast<int>(rng.uniform_int(1, 4000)),
                           static_cast<int>(rng.uniform_int(1, 4000))};
        const BBox b = random_box(rng);
        const BBox back = from_norm(to_norm(b, im), im);
        CHECK(back.x == doctest::Approx(b.x).epsilon(1e-9));
        CHECK(back.y == doctest::Approx(b.y).epsilon(1e-9));
        CHECK(back.w == doctest::Approx(b.w).epsilon(1e-9));
        CHECK(back.h == doctest::Approx(b.h).epsilon(1e-9));
    }
}

TEST_CASE("validity predicates") {
    CHECK(is_valid(BBox{0, 0, 1, 1}));
    CHECK_FALSE(is_valid(BBox{0, 0, 0, 1}));
    CHECK_FALSE(is_valid(BBox{0, 0, 1, -2}));
    CHECK_FALSE(is_valid(ImageSize{0, 100}));
}
