#include <doctest.h>

#include <set>

#include "ssmmot/errors.hpp"
#include "ssmmot/merging.hpp"
#include "ssmmot/metrics.hpp"

using namespace ssmmot;

namespace {

Eigen::VectorXd unit(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v / v.norm();
}

TrackletRecord make_record(int id, int first, int last, double cx,
                           const Eigen::VectorXd& emb) {
    TrackletRecord rec;
    rec.id = id;
    rec.first_frame = first;
    rec.last_frame = last;
    for (int f = first; f <= last; ++f) {
        rec.boxes.push_back(BBox{cx - 10.0, 40.0, 20.0, 20.0});
    }
    rec.embedding = emb;
    return rec;
}

std::vector<MotFrameRecord> straight_track(int id, int from, int to) {
    std::vector<MotFrameRecord> out;
    for (int f = from; f <= to; ++f) {
        out.push_back(MotFrameRecord{f, id, BBox{5.0 * f, 30, 25, 50}, 1.0});
    }
    return out;
}

}  // namespace

TEST_CASE("extract_embeddings runs one forward pass per tracklet") {
    const ModelConfig cfg{2, 16, 2, 4, 8, 6};
    const ModelParams params = init_params(cfg, 3);
    const ImageSize img{640, 480};

    std::vector<MotFrameRecord> results;
    for (int id = 1; id <= 12; ++id) {
        const auto rows = straight_track(id, 1 + 5 * id, 10 + 5 * id);
        results.insert(results.end(), rows.begin(), rows.end());
    }
    const ExtractResult ext = extract_embeddings(results, params, cfg, img);
    CHECK(ext.records.size() == 12);
    CHECK(ext.forward_passes == 12);
    CHECK(ext.excluded_ids.empty());
    for (const auto& rec : ext.records) {
        CHECK(rec.embedding.norm() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(int(rec.boxes.size()) == rec.last_frame - rec.first_frame + 1);
    }

    // duplicate tracklet boxes -> identical embeddings
    auto duped = straight_track(1, 1, 10);
    auto more = straight_track(2, 1, 10);
    duped.insert(duped.end(), more.begin(), more.end());
    const ExtractResult two = extract_embeddings(duped, params, cfg, img);
    REQUIRE(two.records.size() == 2);
    CHECK((two.records[0].embedding - two.records[1].embedding).norm() == 0.0);
}

TEST_CASE("extract_embeddings excludes single-frame tracklets and bridges gaps") {
    const ModelConfig cfg{1, 8, 2, 4, 8, 6};
    const ModelParams params = init_params(cfg, 4);
    const ImageSize img{640, 480};

    std::vector<MotFrameRecord> results = straight_track(1, 1, 4);
    results.push_back(MotFrameRecord{20, 2, BBox{10, 10, 5, 5}, 1.0});  // singleton
    // id 3 with an interior gap at frames 3-4
    results.push_back(MotFrameRecord{2, 3, BBox{0, 0, 10, 10}, 1.0});
    results.push_back(MotFrameRecord{5, 3, BBox{30, 0, 10, 10}, 1.0});

    const ExtractResult ext = extract_embeddings(results, params, cfg, img);
    CHECK(ext.records.size() == 2);
    CHECK(ext.excluded_ids == std::vector<int>{2});
    const auto& gap = ext.records[1];
    REQUIRE(gap.boxes.size() == 4);
    CHECK(gap.boxes[1].x == doctest::Approx(10.0));  // interpolated
    CHECK(gap.boxes[2].x == doctest::Approx(20.0));
}

TEST_CASE("gated_distance applies all three gates") {
    const MergeConfig cfg;
    const auto e = unit({1, 0, 0});
    const auto a = make_record(1, 1, 30, 100.0, e);

    // identical embeddings, small gap, centers 5 px apart -> distance 0
    const auto b = make_record(2, 41, 60, 105.0, e);
    const GateResult ok = gated_distance(a, b, cfg);
    CHECK(ok.status == GateStatus::Ok);
    CHECK(ok.distance == doctest::Approx(0.0));

    // gap of 51 frames
    const auto far_time = make_record(3, 82, 90, 100.0, e);
    CHECK(gated_distance(a, far_time, cfg).status == GateStatus::GapTooLarge);

    // overlapping spans (both alive at frame 40)
    const auto overlap = make_record(4, 25, 45, 100.0, e);
    CHECK(gated_distance(a, overlap, cfg).status == GateStatus::Overlap);

    // spatial gate
    const auto far_space = make_record(5, 41, 60, 170.0, e);
    CHECK(gated_distance(a, far_space, cfg).status == GateStatus::TooFarApart);

    // symmetric in its arguments
    CHECK(gated_distance(b, a, cfg).status == GateStatus::Ok);
    CHECK(gated_distance(b, a, cfg).distance == doctest::Approx(0.0));
}

TEST_CASE("cluster basics") {
    MergeConfig cfg;
    const auto e1 = unit({1, 0, 0});

    // all pairs forbidden -> singletons
    std::vector<TrackletRecord> overlapping = {make_record(1, 1, 50, 100, e1),
                                               make_record(2, 10, 60, 100, e1),
                                               make_record(3, 20, 70, 100, e1)};
    const auto singletons = cluster(overlapping, cfg);
    CHECK(singletons.size() == 3);

    // two close tracklets below tau merge
    std::vector<TrackletRecord> pair = {make_record(1, 1, 20, 100, e1),
                                        make_record(2, 25, 40, 102, unit({0.95, 0.3119, 0}))};
    const double d = gated_distance(pair[0], pair[1], cfg).distance;
    CHECK(d < 0.3);
    const auto merged = cluster(pair, cfg);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0] == std::vector<int>{1, 2});

    // tau 0 merges nothing
    cfg.tau_cos = 0.0;
    CHECK(cluster(pair, cfg).size() == 2);
}

TEST_CASE("cluster three-way tie-break merges the smallest ids") {
    // distances: AB = BC = 0.1, AC forbidden (overlap). Average linkage with
    // the smallest-member tie-break yields {A,B},{C}.
    const double c09 = 0.9;
    const auto e0 = unit({1, 0, 0});
    const auto e_mid = unit({c09, std::sqrt(1 - c09 * c09), 0});
    TrackletRecord a = make_record(1, 1, 20, 100, e0);
    TrackletRecord b = make_record(2, 31, 50, 100, e_mid);
    TrackletRecord c = make_record(5, 61, 80, 100, e0);
    c.first_frame = 10;  // overlap with a only
    c.last_frame = 25;
    c.boxes.assign(25 - 10 + 1, BBox{90, 40, 20, 20});

    const MergeConfig cfg{50, 50.0, 0.3};
    REQUIRE(gated_distance(a, b, cfg).status == GateStatus::Ok);
    REQUIRE(gated_distance(b, c, cfg).status == GateStatus::Ok);
    REQUIRE(gated_distance(a, c, cfg).status == GateStatus::Overlap);
    CHECK(gated_distance(a, b, cfg).distance ==
          doctest::Approx(gated_distance(b, c, cfg).distance));

    const auto clusters = cluster({a, b, c}, cfg);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0] == std::vector<int>{1, 2});
    CHECK(clusters[1] == std::vector<int>{5});
}

TEST_CASE("cluster count is monotone in tau") {
    const auto e0 = unit({1, 0, 0});
    std::vector<TrackletRecord> recs;
    int frame = 1;
    for (int i = 0; i < 6; ++i) {
        const double angle = 0.15 * i;
        recs.push_back(make_record(i + 1, frame, frame + 10, 100.0 + i,
                                   unit({std::cos(angle), std::sin(angle), 0})));
        frame += 20;
    }
    std::size_t prev = recs.size() + 1;
    for (double tau : {0.0, 0.05, 0.1, 0.2, 0.4, 0.8, 1.5}) {
        MergeConfig cfg;
        cfg.tau_cos = tau;
        cfg.max_dist = 1000.0;
        const std::size_t count = cluster(recs, cfg).size();
        CHECK(count <= prev);
        prev = count;
    }
}

TEST_CASE("apply_merge relabels to the smallest id and preserves boxes") {
    std::vector<MotFrameRecord> results = straight_track(1, 1, 10);
    const auto second = straight_track(5, 21, 30);
    const auto third = straight_track(2, 41, 50);
    results.insert(results.end(), second.begin(), second.end());
    results.insert(results.end(), third.begin(), third.end());

    const auto merged = apply_merge(results, {{1, 5}, {2}});
    std::multiset<double> before, after;
    for (const auto& r : results) before.insert(r.bbox.x);
    for (const auto& r : merged) after.insert(r.bbox.x);
    CHECK(before == after);
    for (const auto& r : merged) {
        CHECK(r.id != 5);
        if (r.frame >= 21 && r.frame <= 30) CHECK(r.id == 1);
    }

    // identity partition leaves everything alone
    const auto same = apply_merge(results, {{1}, {5}, {2}});
    CHECK(format_mot(same) == format_mot(apply_merge(results, {})));

    // frame collision inside one cluster is a hard error
    auto collide = straight_track(9, 5, 12);
    auto bad = results;
    bad.insert(bad.end(), collide.begin(), collide.end());
    CHECK_THROWS_AS(apply_merge(bad, {{1, 9}}), OverlapViolation);
}

TEST_CASE("merging a split track improves IDF1") {
    // one GT identity, result split into two ids at frame 51
    std::vector<MotFrameRecord> gt = straight_track(1, 1, 100);
    std::vector<MotFrameRecord> res = straight_track(1, 1, 50);
    const auto tail = straight_track(2, 52, 100);
    res.insert(res.end(), tail.begin(), tail.end());

    const double before = idf1(gt, res);
    const auto merged = apply_merge(res, {{1, 2}});
    const double after = idf1(gt, merged);
    CHECK(after > before);
    CHECK(after == doctest::Approx(2.0 * 99.0 / (100.0 + 99.0)));
}
