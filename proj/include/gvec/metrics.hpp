// Evaluation metrics: normalized mean error under selectable normalization,
// cumulative error distribution, area under it, and failure rate.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "gvec/types.hpp"

namespace gvec {

enum class NormKind {
    inter_pupil,          // distance between the mean points of two index groups
    inter_ocular,         // same mechanism, conventionally the outer eye corners
    bbox_geometric_mean,  // sqrt(w*h) of the ground-truth enclosing rectangle
    explicit_pairs        // caller-supplied index groups
};

struct NormScheme {
    NormKind kind = NormKind::inter_ocular;
    std::vector<std::size_t> left_indices;
    std::vector<std::size_t> right_indices;
};

struct CedPoint {
    double threshold = 0.0;
    double fraction = 0.0;
};

struct EvalReport {
    std::vector<double> per_sample_nme;
    double mean_nme = 0.0;
    double auc = 0.0;
    double auc_threshold = 0.0;
    double fr = 0.0;
    double fr_threshold = 0.0;
    std::vector<CedPoint> ced;
};

// Reference-index presets for the common annotation schemes. The indices are
// community conventions (0-based), not normative: override them freely.
inline NormScheme norm_preset(NormKind kind, std::size_t n_points) {
    NormScheme s;
    s.kind = kind;
    if (kind == NormKind::bbox_geometric_mean) return s;
    switch (n_points) {
        case 68:  // 300W
            if (kind == NormKind::inter_pupil) {
                s.left_indices = {36, 37, 38, 39, 40, 41};
                s.right_indices = {42, 43, 44, 45, 46, 47};
            } else {
                s.left_indices = {36};
                s.right_indices = {45};
            }
            return s;
        case 29:  // COFW
            if (kind == NormKind::inter_pupil) {
                s.left_indices = {16};
                s.right_indices = {17};
            } else {
                s.left_indices = {8};
                s.right_indices = {9};
            }
            return s;
        case 98:  // WFLW
            if (kind == NormKind::inter_pupil) {
                s.left_indices = {96};
                s.right_indices = {97};
            } else {
                s.left_indices = {60};
                s.right_indices = {72};
            }
            return s;
        default:
            throw std::invalid_argument("norm_preset: no reference-index preset for this landmark count");
    }
}

namespace detail {

// Deterministic reduction regardless of how the summands were produced.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline Point2 group_mean(const LandmarkSet& set, const std::vector<std::size_t>& indices) {
    if (indices.empty()) throw std::invalid_argument("normalization_distance: empty index group");
    Point2 m{0.0, 0.0};
    for (std::size_t i : indices) {
        if (i >= set.size()) throw std::invalid_argument("normalization_distance: index out of range");
        m.x += set.points[i].x;
        m.y += set.points[i].y;
    }
    m.x /= static_cast<double>(indices.size());
    m.y /= static_cast<double>(indices.size());
    return m;
}

}  // namespace detail

/// Normalization factor d for one ground-truth set under a scheme.
/// A degenerate factor (coincident reference points, flat bbox) is an error,
/// never a silent division.
inline double normalization_distance(const LandmarkSet& gt, const NormScheme& scheme) {
    double d = 0.0;
    if (scheme.kind == NormKind::bbox_geometric_mean) {
        if (gt.points.empty()) throw std::invalid_argument("normalization_distance: empty landmark set");
        double min_x = gt.points[0].x, max_x = gt.points[0].x;
        double min_y = gt.points[0].y, max_y = gt.points[0].y;
        for (const auto& p : gt.points) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
        d = std::sqrt((max_x - min_x) * (max_y - min_y));
    } else {
        const Point2 left = detail::group_mean(gt, scheme.left_indices);
        const Point2 right = detail::group_mean(gt, scheme.right_indices);
        d = std::hypot(left.x - right.x, left.y - right.y);
    }
    if (!(d > 0.0)) throw std::runtime_error("normalization_distance: degenerate normalization factor");
    return d;
}

/// Mean per-landmark Euclidean error divided by the normalization factor.
inline double nme(const LandmarkSet& pred, const LandmarkSet& gt, double d) {
    if (pred.size() != gt.size()) throw std::invalid_argument("nme: landmark count mismatch");
    if (pred.size() == 0) throw std::invalid_argument("nme: empty landmark set");
    if (!(d > 0.0)) throw std::invalid_argument("nme: normalization factor must be > 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        acc += std::hypot(pred.points[i].x - gt.points[i].x, pred.points[i].y - gt.points[i].y);
    return acc / (static_cast<double>(pred.size()) * d);
}

/// Fraction of errors <= t for each threshold. The boundary sample counts as
/// a success here and as a failure in fr(), so the two always partition.
inline std::vector<CedPoint> ced(std::span<const double> errors, std::span<const double> thresholds) {
    std::vector<CedPoint> curve;
    curve.reserve(thresholds.size());
    for (double t : thresholds) {
        std::size_t hits = 0;
        for (double e : errors)
            if (e <= t) ++hits;
        const double fraction = errors.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(errors.size());
        curve.push_back({t, fraction});
    }
    return curve;
}

/// Exact area under the CED step function on [0, max_t], normalized by max_t.
/// Each error e contributes max(0, max_t - e) / n to the unnormalized area.
inline double auc(std::span<const double> errors, double max_t) {
    if (!(max_t > 0.0)) throw std::invalid_argument("auc: max_t must be > 0");
    if (errors.empty()) return 0.0;
    double area = 0.0;
    for (double e : errors) area += std::max(0.0, max_t - e);
    return area / (static_cast<double>(errors.size()) * max_t);
}

/// Fraction of errors strictly greater than t.
inline double fr(std::span<const double> errors, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("fr: threshold must be > 0");
    if (errors.empty()) return 0.0;
    std::size_t fails = 0;
    for (double e : errors)
        if (e > t) ++fails;
    return static_cast<double>(fails) / static_cast<double>(errors.size());
}

/// Aggregate a batch: per-sample NME (each sample normalized by its own
/// ground truth), mean, AUC and FR at the given thresholds, and the CED
/// sampled at every distinct observed error.
inline EvalReport evaluate(std::span<const LandmarkSet> preds, std::span<const LandmarkSet> gts,
                           const NormScheme& scheme, double auc_t, double fr_t) {
    if (preds.size() != gts.size()) throw std::invalid_argument("evaluate: sample count mismatch");
    if (preds.empty()) throw std::invalid_argument("evaluate: no samples");
    EvalReport report;
    report.per_sample_nme.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double d = normalization_distance(gts[i], scheme);
        report.per_sample_nme.push_back(nme(preds[i], gts[i], d));
    }
    report.mean_nme = detail::pairwise_sum(report.per_sample_nme) / static_cast<double>(preds.size());
    report.auc = auc(report.per_sample_nme, auc_t);
    report.auc_threshold = auc_t;
    report.fr = fr(report.per_sample_nme, fr_t);
    report.fr_threshold = fr_t;
    std::vector<double> thresholds = report.per_sample_nme;
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    report.ced = ced(report.per_sample_nme, thresholds);
    return report;
}

}  // namespace gvec
