// Acceptance suite: exercises the end-to-end contracts at fixed tolerances
// and prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gvec/gvec.hpp"
#include "oracles.hpp"

using namespace gvec;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", num, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

// 1. encode -> decode round trip: exact on grid integers, <= 0.5 px on
//    continuous coordinates, and the shift strictly lowers the mean error.
void criterion_round_trip() {
    const LabelConfig label_cfg{2.0, 3.0, 3.0};
    const GridSize grid{64, 64};
    const DecodeConfig with_shift{0.25, true, 2.0, 2.0};
    DecodeConfig no_shift = with_shift;
    no_shift.shift_delta = 0.0;

    const auto t0 = std::chrono::steady_clock::now();
    auto g = oracle::rng(1001);

    bool exact_ok = true;
    for (int i = 0; i < 1000; ++i) {
        const Point2 p{static_cast<double>(g() % 64), static_cast<double>(g() % 64)};
        const auto dp = decode_pair(encode_vector_label(p, grid, label_cfg), with_shift);
        if (dp.x != p.x || dp.y != p.y) exact_ok = false;
    }

    bool bound_ok = true;
    double mean_shift = 0.0, mean_plain = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Point2 p{oracle::uniform(g, 0.0, 63.49), oracle::uniform(g, 0.0, 63.49)};
        const auto pair = encode_vector_label(p, grid, label_cfg);
        const auto a = decode_pair(pair, with_shift);
        const auto b = decode_pair(pair, no_shift);
        if (std::abs(a.x - p.x) > 0.5 || std::abs(a.y - p.y) > 0.5) bound_ok = false;
        mean_shift += std::abs(a.x - p.x) + std::abs(a.y - p.y);
        mean_plain += std::abs(b.x - p.x) + std::abs(b.y - p.y);
    }
    mean_shift /= 2000.0;
    mean_plain /= 2000.0;

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream detail;
    detail << "mae shift=" << mean_shift << " vs plain=" << mean_plain << ", " << elapsed << " s";
    report(1, "codec round trip", exact_ok && bound_ok && mean_shift < mean_plain && elapsed < 2.0,
           detail.str());
}

// 2. beyond-box inversion of truncated tails, and the strict improvement on
//    a shrunken-box suite.
void criterion_beyond_box() {
    const DecodeConfig on{0.25, true, 2.0, 2.0};
    DecodeConfig off = on;
    off.beyond_box_enabled = false;

    bool inversion_ok = true;
    double worst = 0.0;
    for (int x0 : {-5, -4, -3, -2, -1, 64, 65, 66, 67, 68}) {
        SynthSpec spec;
        spec.pos = {static_cast<double>(x0), 30.0};
        spec.amplitude = 2.0;
        spec.sigma = 2.0;
        const auto pair = synth_vector_pair(spec);
        const auto dp = decode_pair(pair, on);
        const double err = std::abs(dp.x - static_cast<double>(x0));
        worst = std::max(worst, err);
        if (err > 0.5 || !dp.beyond_box_x) inversion_ok = false;
    }

    // landmarks spread over a 100x100 face, box shrunk 10 percent per side
    const FaceBox shrunk{5.0, 5.0, 90.0, 90.0};
    const CropTransform t{shrunk, 256, 4};
    auto g = oracle::rng(1002);
    double mean_on = 0.0, mean_off = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Point2 truth{oracle::uniform(g, 0.0, 100.0), oracle::uniform(g, 0.0, 100.0)};
        const auto hp = to_heatmap_space(truth, t);
        SynthSpec spec;
        spec.pos = hp;
        spec.amplitude = 2.0;
        spec.sigma = 2.0;
        const auto pair = synth_vector_pair(spec);
        const auto a = decode_pair(pair, on);
        const auto b = decode_pair(pair, off);
        mean_on += std::abs(a.x - hp.x) + std::abs(a.y - hp.y);
        mean_off += std::abs(b.x - hp.x) + std::abs(b.y - hp.y);
    }
    mean_on /= 400.0;
    mean_off /= 400.0;

    std::ostringstream detail;
    detail << "worst inversion err=" << worst << " px, shrunken-box mae on=" << mean_on
           << " vs off=" << mean_off;
    report(2, "beyond-box recovery", inversion_ok && mean_on < mean_off, detail.str());
}

// 3. foreground/background imbalance of the two label kinds.
void criterion_imbalance() {
    const LabelConfig cfg{2.0, 3.0, 3.0};
    const auto h = encode_heatmap_label({30.0, 30.0}, {64, 64}, cfg);
    const auto pair = encode_vector_label({30.0, 30.0}, {64, 64}, cfg);
    const double fh = foreground_fraction(h);
    const double fv = foreground_fraction(pair);
    const bool exact = fh == 109.0 / 4096.0 && fv == 22.0 / 128.0;
    const bool banded = fh >= 0.025 && fh <= 0.045 && fv >= 0.15 && fv <= 0.22 && fv / fh >= 5.0;
    std::ostringstream detail;
    detail << "heatmap=" << fh << " vector=" << fv << " ratio=" << fv / fh;
    report(3, "label imbalance", exact && banded, detail.str());
}

// 4. a spike that displaces the 2D argmax must not move the pooled argmax.
void criterion_bpm_robustness() {
    const LabelConfig cfg{2.0, 3.0, 3.0};
    auto h = encode_heatmap_label({30.0, 20.0}, {64, 64}, cfg);
    // 5 px off-peak so the spiked column sits outside both band windows
    // centered on the true column
    h.at(20, 35) += 4.0f;

    std::size_t flat = 0;
    for (std::size_t i = 1; i < h.values.size(); ++i)
        if (h.values[i] > h.values[flat]) flat = i;
    const int am_x = static_cast<int>(flat % 64);
    const int am_y = static_cast<int>(flat / 64);
    const bool displaced = std::abs(am_x - 30) >= 3 || std::abs(am_y - 20) >= 3;

    bool pooled_ok = true;
    for (int l : {3, 5})
        if (argmax_1d(band_pool(h, Band::vertical, l)).index != 30) pooled_ok = false;

    std::ostringstream detail;
    detail << "2d argmax moved to (" << am_x << "," << am_y << ")";
    report(4, "band-pooled argmax robustness", displaced && pooled_ok, detail.str());
}

// 5. op-count scaling exponents and the payload ratio.
void criterion_complexity() {
    const std::vector<int> sizes{32, 64, 128, 256, 512};
    const auto rep = bench_decode(sizes, 68, 5);
    const auto& e64 = rep.entries[1];
    const bool exponents_ok = std::abs(rep.exponent_2d - 2.0) <= 0.05 &&
                              std::abs(rep.exponent_vec - 1.0) <= 0.05;
    const bool payload_ok =
        e64.bytes_2d == 1114112 && e64.bytes_vec == 34816 && e64.bytes_2d == 32 * e64.bytes_vec;
    std::ostringstream detail;
    detail << "exp2d=" << rep.exponent_2d << " expvec=" << rep.exponent_vec << ", n=64 wall "
           << e64.wall_2d_ns << "/" << e64.wall_vec_ns << " ns (informative)";
    report(5, "post-processing complexity scaling", exponents_ok && payload_ok, detail.str());
}

// 6. metric fixtures.
void criterion_metrics() {
    NormScheme bbox;
    bbox.kind = NormKind::bbox_geometric_mean;

    const LandmarkSet gt{{{0.0, 0.0}, {100.0, 64.0}}, CoordSpace::image};
    const std::vector<LandmarkSet> gts{gt, gt};
    const auto self = evaluate(gts, gts, bbox, 0.10, 0.10);
    const bool self_ok = self.mean_nme == 0.0 && self.auc == 1.0 && self.fr == 0.0;

    LandmarkSet p1 = gt, p2 = gt;
    for (auto& p : p1.points) p.y += 4.0;   // per-point distance 4, d=80 -> nme 0.05
    for (auto& p : p2.points) p.y += 12.0;  // nme 0.15
    const std::vector<LandmarkSet> preds{p1, p2};
    const auto two = evaluate(preds, gts, bbox, 0.10, 0.10);
    const bool two_ok = std::abs(two.mean_nme - 0.10) < 1e-12 && two.fr == 0.5 &&
                        std::abs(two.auc - 0.25) < 1e-12;

    auto g = oracle::rng(1003);
    std::vector<double> errors;
    for (int i = 0; i < 50; ++i) errors.push_back(oracle::uniform(g, 0.0, 0.2));
    const double step = auc(errors, 0.1);
    const double trap = oracle::trapezoid_auc(errors, 0.1, 1e-4);
    const bool integral_ok = std::abs(step - trap) <= 1e-3;

    std::ostringstream detail;
    detail << "two-sample mean=" << two.mean_nme << " fr=" << two.fr << " auc=" << two.auc
           << ", step-trapezoid gap=" << std::abs(step - trap);
    report(6, "metric fixtures", self_ok && two_ok && integral_ok, detail.str());
}

// 7. byte-lossless format round trips.
void criterion_formats() {
    auto g = oracle::rng(1004);
    bool pts_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        PtsFile pts;
        const int n = 1 + static_cast<int>(g() % 106);
        for (int i = 0; i < n; ++i)
            pts.points.push_back({oracle::uniform(g, -2000.0, 2000.0), oracle::uniform(g, -2000.0, 2000.0)});
        const auto bytes = write_pts(pts);
        if (write_pts(read_pts(bytes)) != bytes) pts_ok = false;
    }

    bool gvt_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        TensorFile t;
        const int rank = 1 + static_cast<int>(g() % 4);
        std::size_t n = 1;
        for (int r = 0; r < rank; ++r) {
            t.dims.push_back(1 + static_cast<std::uint32_t>(g() % 8));
            n *= t.dims.back();
        }
        for (std::size_t i = 0; i < n; ++i)
            t.payload.push_back(static_cast<float>(oracle::uniform(g, -100.0, 100.0)));
        const auto bytes = write_tensor(t);
        const auto back = read_tensor(bytes);
        if (back.dims != t.dims || back.payload != t.payload || write_tensor(back) != bytes)
            gvt_ok = false;
    }

    report(7, "format round trips", pts_ok && gvt_ok, "100 pts + 100 gvt fixtures");
}

}  // namespace

int main() {
    criterion_round_trip();
    criterion_beyond_box();
    criterion_imbalance();
    criterion_bpm_robustness();
    criterion_complexity();
    criterion_metrics();
    criterion_formats();
    if (g_failures > 0) std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
