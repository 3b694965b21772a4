#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gvec/metrics.hpp"
#include "oracles.hpp"

using namespace gvec;

namespace {

LandmarkSet make_set(std::vector<Point2> pts) { return {std::move(pts), CoordSpace::image}; }

LandmarkSet offset_all(const LandmarkSet& set, double dx, double dy) {
    LandmarkSet out = set;
    for (auto& p : out.points) {
        p.x += dx;
        p.y += dy;
    }
    return out;
}

// Two samples with per-sample NME 0.05 and 0.15 under bbox-gm normalization
// (enclosing rectangle 100 x 64 -> d = 80).
struct TwoSampleFixture {
    std::vector<LandmarkSet> gts;
    std::vector<LandmarkSet> preds;
};

TwoSampleFixture two_sample_fixture() {
    TwoSampleFixture f;
    const auto gt = make_set({{0.0, 0.0}, {100.0, 64.0}});
    f.gts = {gt, gt};
    f.preds = {offset_all(gt, 0.0, 4.0), offset_all(gt, 0.0, 12.0)};
    return f;
}

}  // namespace

TEST_CASE("normalization distance") {
    NormScheme pupil;
    pupil.kind = NormKind::inter_pupil;
    pupil.left_indices = {0};
    pupil.right_indices = {1};
    CHECK(normalization_distance(make_set({{0.0, 0.0}, {3.0, 4.0}}), pupil) == 5.0);

    NormScheme bbox;
    bbox.kind = NormKind::bbox_geometric_mean;
    CHECK(normalization_distance(make_set({{0.0, 0.0}, {100.0, 64.0}}), bbox) == Catch::Approx(80.0));

    CHECK_THROWS_AS(normalization_distance(make_set({{5.0, 5.0}, {5.0, 5.0}}), bbox), std::runtime_error);
    CHECK_THROWS_AS(normalization_distance(make_set({{0.0, 0.0}, {0.0, 0.0}}), pupil), std::runtime_error);

    NormScheme out_of_range = pupil;
    out_of_range.right_indices = {9};
    CHECK_THROWS_AS(normalization_distance(make_set({{0.0, 0.0}, {1.0, 1.0}}), out_of_range),
                    std::invalid_argument);
}

TEST_CASE("group means drive pupil-style normalization") {
    NormScheme scheme;
    scheme.kind = NormKind::inter_pupil;
    scheme.left_indices = {0, 1};
    scheme.right_indices = {2, 3};
    // means (0,0) and (6,8) -> distance 10
    const auto gt = make_set({{-1.0, 0.0}, {1.0, 0.0}, {5.0, 8.0}, {7.0, 8.0}});
    CHECK(normalization_distance(gt, scheme) == Catch::Approx(10.0));
}

TEST_CASE("nme") {
    const auto gt = make_set({{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}});
    CHECK(nme(gt, gt, 100.0) == 0.0);
    CHECK(nme(offset_all(gt, 3.0, 4.0), gt, 100.0) == Catch::Approx(0.05));

    const auto gt2 = make_set({{0.0, 0.0}, {10.0, 0.0}});
    auto pred2 = gt2;
    pred2.points[0].x += 3.0;
    pred2.points[0].y += 4.0;
    CHECK(nme(pred2, gt2, 50.0) == Catch::Approx(0.05));

    CHECK_THROWS_AS(nme(gt2, gt, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(nme(gt, gt, 0.0), std::invalid_argument);
}

TEST_CASE("ced fractions") {
    const std::vector<double> errors{0.05, 0.15};
    const std::vector<double> ts{0.0, 0.05, 0.10, 0.20};
    const auto curve = ced(errors, ts);
    CHECK(curve[0].fraction == 0.0);
    CHECK(curve[1].fraction == 0.5);  // boundary counts as success
    CHECK(curve[2].fraction == 0.5);
    CHECK(curve[3].fraction == 1.0);
}

TEST_CASE("auc step integral") {
    CHECK(auc(std::vector<double>{0.0, 0.0}, 0.1) == 1.0);
    CHECK(auc(std::vector<double>{0.05}, 0.1) == Catch::Approx(0.5));
    CHECK(auc(std::vector<double>{0.3, 0.2}, 0.1) == 0.0);
    CHECK_THROWS_AS(auc(std::vector<double>{0.1}, 0.0), std::invalid_argument);
}

TEST_CASE("fr uses a strict boundary") {
    const std::vector<double> errors{0.05, 0.15};
    CHECK(fr(errors, 0.10) == 0.5);
    CHECK(fr(errors, 0.15) == 0.0);
    CHECK(fr(errors, 0.2) == 0.0);
    CHECK(fr(std::vector<double>{0.3}, 0.1) == 1.0);
}

TEST_CASE("fr and ced partition every sample") {
    auto g = oracle::rng(51);
    std::vector<double> errors;
    for (int i = 0; i < 100; ++i) errors.push_back(oracle::uniform(g, 0.0, 0.3));
    errors.push_back(0.1);  // exercise the boundary
    for (double t : {0.05, 0.1, 0.15, 0.2999}) {
        const auto curve = ced(errors, std::vector<double>{t});
        CHECK(curve[0].fraction + fr(errors, t) == Catch::Approx(1.0));
    }
}

TEST_CASE("auc step integral matches dense trapezoid integration") {
    auto g = oracle::rng(52);
    std::vector<double> errors;
    for (int i = 0; i < 50; ++i) errors.push_back(oracle::uniform(g, 0.0, 0.2));
    const double step = auc(errors, 0.1);
    const double trap = oracle::trapezoid_auc(errors, 0.1, 1e-4);
    CHECK(step == Catch::Approx(trap).margin(1e-3));
}

TEST_CASE("auc is monotone in per-sample improvements") {
    std::vector<double> errors{0.02, 0.08, 0.12, 0.3};
    const double before_auc = auc(errors, 0.1);
    const double before_fr = fr(errors, 0.1);
    errors[2] = 0.05;  // one sample improves
    CHECK(auc(errors, 0.1) >= before_auc);
    CHECK(fr(errors, 0.1) <= before_fr);
    CHECK(auc(errors, 0.1) >= 0.0);
    CHECK(auc(errors, 0.1) <= 1.0);
}

TEST_CASE("nme is scale invariant when d scales with the geometry") {
    auto g = oracle::rng(53);
    const auto gt = make_set({{0.0, 0.0}, {10.0, 2.0}, {4.0, 9.0}, {7.0, 1.0}});
    auto pred = gt;
    for (auto& p : pred.points) {
        p.x += oracle::uniform(g, -1.0, 1.0);
        p.y += oracle::uniform(g, -1.0, 1.0);
    }
    NormScheme bbox;
    bbox.kind = NormKind::bbox_geometric_mean;
    const double base = nme(pred, gt, normalization_distance(gt, bbox));
    for (double s : {0.5, 3.0, 17.0}) {
        auto gt_s = gt;
        auto pred_s = pred;
        for (auto& p : gt_s.points) {
            p.x *= s;
            p.y *= s;
        }
        for (auto& p : pred_s.points) {
            p.x *= s;
            p.y *= s;
        }
        CHECK(nme(pred_s, gt_s, normalization_distance(gt_s, bbox)) == Catch::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("evaluate aggregates the two-sample fixture") {
    const auto f = two_sample_fixture();
    NormScheme bbox;
    bbox.kind = NormKind::bbox_geometric_mean;
    const auto report = evaluate(f.preds, f.gts, bbox, 0.10, 0.10);
    REQUIRE(report.per_sample_nme.size() == 2);
    CHECK(report.per_sample_nme[0] == Catch::Approx(0.05));
    CHECK(report.per_sample_nme[1] == Catch::Approx(0.15));
    CHECK(report.mean_nme == Catch::Approx(0.10));
    CHECK(report.fr == 0.5);
    CHECK(report.auc == Catch::Approx(0.25));
    REQUIRE(report.ced.size() == 2);
    CHECK(report.ced[0].threshold < report.ced[1].threshold);
    CHECK(report.ced[0].fraction == 0.5);
    CHECK(report.ced[1].fraction == 1.0);
}

TEST_CASE("evaluate of identical sets is perfect") {
    const auto gt = make_set({{0.0, 0.0}, {50.0, 10.0}, {20.0, 40.0}});
    const std::vector<LandmarkSet> batch{gt, gt, gt};
    NormScheme bbox;
    bbox.kind = NormKind::bbox_geometric_mean;
    const auto report = evaluate(batch, batch, bbox, 0.10, 0.10);
    CHECK(report.mean_nme == 0.0);
    CHECK(report.auc == 1.0);
    CHECK(report.fr == 0.0);
}

TEST_CASE("evaluate rejects empty and mismatched batches") {
    NormScheme bbox;
    bbox.kind = NormKind::bbox_geometric_mean;
    CHECK_THROWS_AS(evaluate({}, {}, bbox, 0.1, 0.1), std::invalid_argument);
    const auto f = two_sample_fixture();
    CHECK_THROWS_AS(evaluate(std::span(f.preds.data(), 1), f.gts, bbox, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("norm presets carry the conventional reference indices") {
    const auto ion68 = norm_preset(NormKind::inter_ocular, 68);
    CHECK(ion68.left_indices == std::vector<std::size_t>{36});
    CHECK(ion68.right_indices == std::vector<std::size_t>{45});
    const auto ipn68 = norm_preset(NormKind::inter_pupil, 68);
    CHECK(ipn68.left_indices.size() == 6);
    const auto ion98 = norm_preset(NormKind::inter_ocular, 98);
    CHECK(ion98.left_indices == std::vector<std::size_t>{60});
    CHECK(ion98.right_indices == std::vector<std::size_t>{72});
    CHECK(norm_preset(NormKind::bbox_geometric_mean, 106).left_indices.empty());
    CHECK_THROWS_AS(norm_preset(NormKind::inter_ocular, 5), std::invalid_argument);
}
