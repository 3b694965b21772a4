// Coordinate recovery from predicted vector pairs: 1D argmax, quarter-pixel
// shift toward the larger neighbor, and closed-form inversion of a truncated
// Gaussian tail when the maximum sits at a vector endpoint.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "gvec/codec.hpp"
#include "gvec/geometry.hpp"
#include "gvec/types.hpp"

namespace gvec {

struct DecodeConfig {
    double shift_delta = 0.25;      // grid px, applied toward the larger neighbor
    bool beyond_box_enabled = true;
    double tau = 2.0;               // assumed peak scale of a truncated tail
    double sigma = 2.0;             // standard deviation used for inversion

    void validate() const {
        if (!(shift_delta >= 0.0 && shift_delta < 0.5))
            throw std::invalid_argument("DecodeConfig: shift_delta must lie in [0, 0.5)");
        if (!(tau > 0.0)) throw std::invalid_argument("DecodeConfig: tau must be > 0");
        if (!(sigma > 0.0)) throw std::invalid_argument("DecodeConfig: sigma must be > 0");
    }
};

struct DecodedPoint {
    double x = 0.0;  // continuous heatmap-space coordinates
    double y = 0.0;
    bool beyond_box_x = false;
    bool beyond_box_y = false;
    double peak_x = 0.0;  // maximum value found on each vector
    double peak_y = 0.0;
};

struct Argmax {
    std::size_t index = 0;
    double value = 0.0;
};

/// Smallest index attaining the maximum. Throws on empty input or any
/// non-finite element.
inline Argmax argmax_1d(std::span<const float> v) {
    if (v.empty()) throw std::invalid_argument("argmax_1d: empty vector");
    std::size_t best = 0;
    float best_val = v[0];
    if (!std::isfinite(best_val)) throw std::invalid_argument("argmax_1d: non-finite element");
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw std::invalid_argument("argmax_1d: non-finite element");
        if (v[i] > best_val) {
            best = i;
            best_val = v[i];
        }
    }
    return {best, static_cast<double>(best_val)};
}

/// Quarter-pixel-style refinement: move delta toward the larger neighbor,
/// stay put on ties and at endpoints (endpoints defer to beyond_box).
inline double subpixel_shift(std::span<const float> v, std::size_t idx, double delta) {
    if (idx == 0 || idx + 1 >= v.size()) return static_cast<double>(idx);
    const float left = v[idx - 1];
    const float right = v[idx + 1];
    if (right > left) return static_cast<double>(idx) + delta;
    if (left > right) return static_cast<double>(idx) - delta;
    return static_cast<double>(idx);
}

/// Invert the assumed tail distribution value = tau * exp(-d^2 / (2 sigma^2))
/// at an endpoint to place the peak outside the grid. Values above tau clamp
/// to the endpoint itself; values <= 0 cannot be inverted and also return the
/// endpoint. Calling this with an interior index is a contract violation.
inline double beyond_box(std::span<const float> v, std::size_t idx, double value, const DecodeConfig& cfg) {
    cfg.validate();
    if (v.empty() || (idx != 0 && idx != v.size() - 1))
        throw std::invalid_argument("beyond_box: index must be a vector endpoint");
    const double endpoint = static_cast<double>(idx);
    if (!(value > 0.0)) return endpoint;
    const double ratio = std::min(value, cfg.tau) / cfg.tau;
    const double offset = std::sqrt(-2.0 * cfg.sigma * cfg.sigma * std::log(ratio));
    return idx == 0 ? -offset : endpoint + offset;
}

namespace detail {

struct AxisDecode {
    double coord = 0.0;
    bool beyond = false;
    double peak = 0.0;
};

inline AxisDecode decode_axis(std::span<const float> v, const DecodeConfig& cfg) {
    const Argmax m = argmax_1d(v);
    if (m.index == 0 || m.index == v.size() - 1) {
        if (cfg.beyond_box_enabled) return {beyond_box(v, m.index, m.value, cfg), true, m.value};
        return {static_cast<double>(m.index), false, m.value};
    }
    return {subpixel_shift(v, m.index, cfg.shift_delta), false, m.value};
}

}  // namespace detail

/// Recover one continuous heatmap-space point from a vector pair. The two
/// axes are decoded independently.
inline DecodedPoint decode_pair(const GaussianVectorPair& pair, const DecodeConfig& cfg) {
    cfg.validate();
    const auto ax = detail::decode_axis(pair.x, cfg);
    const auto ay = detail::decode_axis(pair.y, cfg);
    DecodedPoint out;
    out.x = ax.coord;
    out.y = ay.coord;
    out.beyond_box_x = ax.beyond;
    out.beyond_box_y = ay.beyond;
    out.peak_x = ax.peak;
    out.peak_y = ay.peak;
    return out;
}

/// Decode every pair and map the results into original-image space.
inline LandmarkSet decode_stack(const std::vector<GaussianVectorPair>& pairs, const DecodeConfig& cfg,
                                const CropTransform& t) {
    t.validate();
    LandmarkSet set;
    set.space = CoordSpace::image;
    set.points.reserve(pairs.size());
    for (const auto& pair : pairs) {
        const DecodedPoint dp = decode_pair(pair, cfg);
        set.points.push_back(to_image_space({dp.x, dp.y}, t));
    }
    return set;
}

}  // namespace gvec
