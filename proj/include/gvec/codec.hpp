// Label codec: encode continuous landmark coordinates into per-axis
// quasi-Gaussian vector labels (or a baseline 2D heatmap label), plus the
// training loss and foreground/background statistics.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gvec/types.hpp"

namespace gvec {

struct LabelConfig {
    double sigma = 2.0;              // standard deviation, heatmap-grid pixels
    double theta = 3.0;              // peak boost added on top of the unit peak
    double cutoff_multiplier = 3.0;  // foreground radius in units of sigma

    void validate() const {
        if (!(sigma > 0.0)) throw std::invalid_argument("LabelConfig: sigma must be > 0");
        if (!(theta >= 0.0)) throw std::invalid_argument("LabelConfig: theta must be >= 0");
        if (!(cutoff_multiplier > 0.0)) throw std::invalid_argument("LabelConfig: cutoff_multiplier must be > 0");
    }
    double cutoff_radius() const { return cutoff_multiplier * sigma; }
    double peak_value() const { return 1.0 + theta; }
};

// Per-landmark pair of 1D response vectors: x over the grid width, y over
// the grid height.
struct GaussianVectorPair {
    std::vector<float> x;
    std::vector<float> y;
    int landmark_index = 0;
};

/// Round-to-nearest with halves toward +inf, the quantization rule used for
/// peak placement everywhere in this library.
inline int quantize_coord(double v) {
    return static_cast<int>(std::floor(v + 0.5));
}

namespace detail {

// One axis of a label: boosted peak at the quantized index, Gaussian of the
// continuous distance elsewhere, zero outside the cutoff radius. Keeping the
// distances continuous preserves which neighbor of the peak is larger, which
// is what the subpixel shift reads back at decode time.
inline std::vector<float> encode_label_axis(double coord, int len, const LabelConfig& cfg) {
    std::vector<float> v(static_cast<std::size_t>(len), 0.0f);
    const int peak = quantize_coord(coord);
    const double radius = cfg.cutoff_radius();
    const double denom = 2.0 * cfg.sigma * cfg.sigma;
    const int lo = std::max(0, static_cast<int>(std::ceil(coord - radius)));
    const int hi = std::min(len - 1, static_cast<int>(std::floor(coord + radius)));
    for (int i = lo; i <= hi; ++i) {
        if (i == peak) continue;
        const double d = std::abs(static_cast<double>(i) - coord);
        if (d < radius) v[static_cast<std::size_t>(i)] = static_cast<float>(std::exp(-(d * d) / denom));
    }
    v[static_cast<std::size_t>(peak)] = static_cast<float>(cfg.peak_value());
    return v;
}

inline void require_encodable(Point2 p, GridSize grid) {
    if (grid.width <= 0 || grid.height <= 0)
        throw std::invalid_argument("encode: grid dimensions must be positive");
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("encode: landmark coordinate is not finite");
    const int qx = quantize_coord(p.x);
    const int qy = quantize_coord(p.y);
    if (qx < 0 || qx >= grid.width || qy < 0 || qy >= grid.height)
        throw std::invalid_argument("encode: landmark quantizes outside the grid");
}

}  // namespace detail

/// Label vector for a single axis; the coordinate must quantize into [0,len).
inline std::vector<float> encode_label_axis(double coord, int len, const LabelConfig& cfg) {
    cfg.validate();
    if (len <= 0) throw std::invalid_argument("encode: axis length must be positive");
    if (!std::isfinite(coord)) throw std::invalid_argument("encode: landmark coordinate is not finite");
    const int q = quantize_coord(coord);
    if (q < 0 || q >= len) throw std::invalid_argument("encode: landmark quantizes outside the grid");
    return detail::encode_label_axis(coord, len, cfg);
}

/// Encode a continuous heatmap-space point as a vector label pair.
/// Rejects points whose rounded index falls outside the grid.
inline GaussianVectorPair encode_vector_label(Point2 p, GridSize grid, const LabelConfig& cfg) {
    cfg.validate();
    detail::require_encodable(p, grid);
    GaussianVectorPair pair;
    pair.x = detail::encode_label_axis(p.x, grid.width, cfg);
    pair.y = detail::encode_label_axis(p.y, grid.height, cfg);
    return pair;
}

/// Baseline single-channel 2D heatmap label with the same peak/cutoff rules.
inline Heatmap encode_heatmap_label(Point2 p, GridSize grid, const LabelConfig& cfg) {
    cfg.validate();
    detail::require_encodable(p, grid);
    Heatmap h;
    h.height = grid.height;
    h.width = grid.width;
    h.values.assign(static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height), 0.0f);
    const int qx = quantize_coord(p.x);
    const int qy = quantize_coord(p.y);
    const double radius = cfg.cutoff_radius();
    const double denom = 2.0 * cfg.sigma * cfg.sigma;
    const int row_lo = std::max(0, static_cast<int>(std::ceil(p.y - radius)));
    const int row_hi = std::min(grid.height - 1, static_cast<int>(std::floor(p.y + radius)));
    const int col_lo = std::max(0, static_cast<int>(std::ceil(p.x - radius)));
    const int col_hi = std::min(grid.width - 1, static_cast<int>(std::floor(p.x + radius)));
    for (int row = row_lo; row <= row_hi; ++row) {
        for (int col = col_lo; col <= col_hi; ++col) {
            if (row == qy && col == qx) continue;
            const double d = std::hypot(static_cast<double>(col) - p.x, static_cast<double>(row) - p.y);
            if (d < radius) h.at(row, col) = static_cast<float>(std::exp(-(d * d) / denom));
        }
    }
    h.at(qy, qx) = static_cast<float>(cfg.peak_value());
    return h;
}

/// Mean squared error over all elements of both vectors of the pair.
inline double mse_loss(const GaussianVectorPair& pred, const GaussianVectorPair& label) {
    if (pred.x.size() != label.x.size() || pred.y.size() != label.y.size())
        throw std::invalid_argument("mse_loss: vector length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.x.size(); ++i) {
        const double diff = static_cast<double>(pred.x[i]) - static_cast<double>(label.x[i]);
        acc += diff * diff;
    }
    for (std::size_t i = 0; i < pred.y.size(); ++i) {
        const double diff = static_cast<double>(pred.y[i]) - static_cast<double>(label.y[i]);
        acc += diff * diff;
    }
    return acc / static_cast<double>(pred.x.size() + pred.y.size());
}

// Foreground = nonzero elements. Labels are generated with exact zeros
// outside the cutoff, so counting is unambiguous.
inline double foreground_fraction(const Heatmap& h) {
    if (h.values.empty()) return 0.0;
    std::size_t nonzero = 0;
    for (float v : h.values)
        if (v != 0.0f) ++nonzero;
    return static_cast<double>(nonzero) / static_cast<double>(h.values.size());
}

inline double foreground_fraction(const GaussianVectorPair& pair) {
    const std::size_t total = pair.x.size() + pair.y.size();
    if (total == 0) return 0.0;
    std::size_t nonzero = 0;
    for (float v : pair.x)
        if (v != 0.0f) ++nonzero;
    for (float v : pair.y)
        if (v != 0.0f) ++nonzero;
    return static_cast<double>(nonzero) / static_cast<double>(total);
}

}  // namespace gvec
