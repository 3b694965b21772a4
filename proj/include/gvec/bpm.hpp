// Band pooling: marginalize a 2D response grid into the two axis vectors by
// sliding full-height / full-width average-pooling bands, then fuse the
// vectors obtained from two bandwidths.
#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "gvec/codec.hpp"
#include "gvec/types.hpp"

namespace gvec {

// A vertical band (h x l) slides horizontally and yields the x vector; a
// horizontal band (l x w) slides vertically and yields the y vector.
enum class Band { vertical, horizontal };

struct BpmConfig {
    int bandwidth_a = 3;
    int bandwidth_b = 5;
    double alpha = 0.5;

    void validate(int height, int width) const {
        const int side = std::min(height, width);
        for (int l : {bandwidth_a, bandwidth_b}) {
            if (l < 1 || l % 2 == 0)
                throw std::invalid_argument("BpmConfig: bandwidths must be odd and >= 1");
            if (l > side)
                throw std::invalid_argument("BpmConfig: bandwidth exceeds grid side");
        }
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("BpmConfig: alpha must lie in (0,1)");
    }
};

/// Average-pool one band orientation over the grid. The band is padded with
/// zeros past the edges and the divisor stays fixed at (long side * l), so
/// edge outputs are averages over the same element count as interior ones.
inline std::vector<float> band_pool(std::span<const float> values, int height, int width, Band band, int l) {
    if (l <= 0 || l % 2 == 0)
        throw std::invalid_argument("band_pool: bandwidth must be odd and positive");
    const int out_len = band == Band::vertical ? width : height;
    const int ortho_len = band == Band::vertical ? height : width;
    if (l > out_len)
        throw std::invalid_argument("band_pool: bandwidth exceeds grid side");
    if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw std::invalid_argument("band_pool: buffer size does not match dimensions");

    // Collapse the orthogonal axis first, then slide the window over the
    // collapsed line. Equivalent to summing the band region directly.
    std::vector<double> line(static_cast<std::size_t>(out_len), 0.0);
    if (band == Band::vertical) {
        for (int row = 0; row < height; ++row) {
            const float* row_ptr = values.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(width);
            for (int col = 0; col < width; ++col) line[static_cast<std::size_t>(col)] += row_ptr[col];
        }
    } else {
        for (int row = 0; row < height; ++row) {
            const float* row_ptr = values.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(width);
            double acc = 0.0;
            for (int col = 0; col < width; ++col) acc += row_ptr[col];
            line[static_cast<std::size_t>(row)] = acc;
        }
    }

    const int half = (l - 1) / 2;
    const double divisor = static_cast<double>(ortho_len) * static_cast<double>(l);
    std::vector<float> out(static_cast<std::size_t>(out_len), 0.0f);
    for (int i = 0; i < out_len; ++i) {
        double acc = 0.0;
        const int lo = std::max(0, i - half);
        const int hi = std::min(out_len - 1, i + half);
        for (int k = lo; k <= hi; ++k) acc += line[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = static_cast<float>(acc / divisor);
    }
    return out;
}

inline std::vector<float> band_pool(const Heatmap& h, Band band, int l) {
    return band_pool(std::span<const float>(h.values), h.height, h.width, band, l);
}

/// Weighted elementwise fusion of two pooled vectors.
inline std::vector<float> aggregate(std::span<const float> v1, std::span<const float> v2, double alpha) {
    if (v1.size() != v2.size())
        throw std::invalid_argument("aggregate: vector length mismatch");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("aggregate: alpha must lie in (0,1)");
    std::vector<float> out(v1.size());
    for (std::size_t i = 0; i < v1.size(); ++i)
        out[i] = static_cast<float>(alpha * static_cast<double>(v1[i]) + (1.0 - alpha) * static_cast<double>(v2[i]));
    return out;
}

/// Convert every channel of a stack into its predicted vector pair using the
/// two configured bandwidths. Channels are independent; the result does not
/// depend on processing order.
inline std::vector<GaussianVectorPair> bpm_apply(const HeatmapStack& stack, const BpmConfig& cfg) {
    stack.validate();
    cfg.validate(stack.height, stack.width);
    std::vector<GaussianVectorPair> pairs;
    pairs.reserve(static_cast<std::size_t>(stack.landmarks));
    for (int l = 0; l < stack.landmarks; ++l) {
        const auto ch = stack.channel(l);
        GaussianVectorPair pair;
        pair.landmark_index = l;
        pair.x = aggregate(band_pool(ch, stack.height, stack.width, Band::vertical, cfg.bandwidth_a),
                           band_pool(ch, stack.height, stack.width, Band::vertical, cfg.bandwidth_b), cfg.alpha);
        pair.y = aggregate(band_pool(ch, stack.height, stack.width, Band::horizontal, cfg.bandwidth_a),
                           band_pool(ch, stack.height, stack.width, Band::horizontal, cfg.bandwidth_b), cfg.alpha);
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

}  // namespace gvec
