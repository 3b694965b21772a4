// Synthetic response generation and the post-processing efficiency study:
// counted argmax comparisons, wall-clock timing, payload sizes, and the
// log-log scaling fit.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "gvec/codec.hpp"
#include "gvec/types.hpp"

namespace gvec {

struct Spike {
    int x = 0;
    int y = 0;
    double magnitude = 0.0;
};

// Recipe for a synthetic prediction: a truncated Gaussian profile around a
// landmark that may sit outside the grid, optional uniform noise, and an
// optional single-pixel spike. Identical specs produce identical outputs.
struct SynthSpec {
    int width = 64;
    int height = 64;
    Point2 pos{};             // continuous, may be out-of-grid
    double amplitude = 1.0;   // profile value at the continuous peak
    double sigma = 2.0;
    double noise_amplitude = 0.0;  // additive uniform noise in [0, amp]
    std::uint64_t seed = 0;
    std::optional<Spike> spike;

    void validate() const {
        if (width <= 0 || height <= 0) throw std::invalid_argument("SynthSpec: dimensions must be positive");
        if (!(sigma > 0.0)) throw std::invalid_argument("SynthSpec: sigma must be > 0");
        if (noise_amplitude < 0.0) throw std::invalid_argument("SynthSpec: noise amplitude must be >= 0");
    }
};

namespace detail {

// Fixed mapping from raw engine output to [0,1); keeps generated fixtures
// identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double profile_value(double d, double amplitude, double sigma) {
    if (!(d < 3.0 * sigma)) return 0.0;
    return amplitude * std::exp(-(d * d) / (2.0 * sigma * sigma));
}

}  // namespace detail

/// Truncated Gaussian heatmap around spec.pos (cutoff 3*sigma, no peak
/// boost), plus noise and spike. Cells keep the exact tail profile, so a
/// label generated at an out-of-grid position is simply cut off by the grid.
inline Heatmap synth_heatmap(const SynthSpec& spec) {
    spec.validate();
    Heatmap h;
    h.height = spec.height;
    h.width = spec.width;
    h.values.assign(static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height), 0.0f);
    for (int row = 0; row < spec.height; ++row)
        for (int col = 0; col < spec.width; ++col) {
            const double d = std::hypot(static_cast<double>(col) - spec.pos.x, static_cast<double>(row) - spec.pos.y);
            h.at(row, col) = static_cast<float>(detail::profile_value(d, spec.amplitude, spec.sigma));
        }
    if (spec.noise_amplitude > 0.0) {
        std::mt19937_64 rng(spec.seed);
        for (auto& v : h.values)
            v = static_cast<float>(static_cast<double>(v) + spec.noise_amplitude * detail::uniform01(rng));
    }
    if (spec.spike && spec.spike->x >= 0 && spec.spike->x < spec.width && spec.spike->y >= 0 &&
        spec.spike->y < spec.height)
        h.at(spec.spike->y, spec.spike->x) += static_cast<float>(spec.spike->magnitude);
    return h;
}

/// 1D counterpart: the pair of axis vectors a truncated label would carry.
/// This is how out-of-grid supervision fixtures are produced, since the
/// label encoder itself rejects out-of-grid points.
inline GaussianVectorPair synth_vector_pair(const SynthSpec& spec) {
    spec.validate();
    GaussianVectorPair pair;
    pair.x.assign(static_cast<std::size_t>(spec.width), 0.0f);
    pair.y.assign(static_cast<std::size_t>(spec.height), 0.0f);
    for (int i = 0; i < spec.width; ++i)
        pair.x[static_cast<std::size_t>(i)] = static_cast<float>(
            detail::profile_value(std::abs(static_cast<double>(i) - spec.pos.x), spec.amplitude, spec.sigma));
    for (int i = 0; i < spec.height; ++i)
        pair.y[static_cast<std::size_t>(i)] = static_cast<float>(
            detail::profile_value(std::abs(static_cast<double>(i) - spec.pos.y), spec.amplitude, spec.sigma));
    if (spec.noise_amplitude > 0.0) {
        std::mt19937_64 rng(spec.seed);
        for (auto& v : pair.x)
            v = static_cast<float>(static_cast<double>(v) + spec.noise_amplitude * detail::uniform01(rng));
        for (auto& v : pair.y)
            v = static_cast<float>(static_cast<double>(v) + spec.noise_amplitude * detail::uniform01(rng));
    }
    if (spec.spike) {
        if (spec.spike->x >= 0 && spec.spike->x < spec.width)
            pair.x[static_cast<std::size_t>(spec.spike->x)] += static_cast<float>(spec.spike->magnitude);
        if (spec.spike->y >= 0 && spec.spike->y < spec.height)
            pair.y[static_cast<std::size_t>(spec.spike->y)] += static_cast<float>(spec.spike->magnitude);
    }
    return pair;
}

struct CountedArgmax {
    std::size_t index = 0;
    float value = 0.0f;
    std::uint64_t comparisons = 0;
};

/// Linear-scan argmax that counts its value comparisons: n-1 for n elements.
inline CountedArgmax counted_argmax(std::span<const float> v) {
    if (v.empty()) throw std::invalid_argument("counted_argmax: empty vector");
    CountedArgmax r{0, v[0], 0};
    for (std::size_t i = 1; i < v.size(); ++i) {
        ++r.comparisons;
        if (v[i] > r.value) {
            r.index = i;
            r.value = v[i];
        }
    }
    return r;
}

// Closed-form per-channel comparison counts for an N*N grid.
inline std::uint64_t argmax_ops_2d(int n) {
    return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) - 1;
}
inline std::uint64_t argmax_ops_vec(int n) {
    return 2 * (static_cast<std::uint64_t>(n) - 1);
}

struct BenchEntry {
    int n = 0;
    std::uint64_t ops_2d = 0;       // counted comparisons over all channels
    std::uint64_t ops_vec = 0;
    std::uint64_t wall_2d_ns = 0;   // median over trials
    std::uint64_t wall_vec_ns = 0;
    std::uint64_t bytes_2d = 0;     // f32 payload of (L,n,n) vs (L,n,2)
    std::uint64_t bytes_vec = 0;
};

struct BenchReport {
    int landmarks = 0;
    int trials = 0;
    std::vector<BenchEntry> entries;
    double exponent_2d = 0.0;
    double exponent_vec = 0.0;
};

/// Least-squares slope of log(cost) against log(n).
inline double fit_scaling_exponent(std::span<const double> ns, std::span<const double> costs) {
    if (ns.size() != costs.size()) throw std::invalid_argument("fit_scaling_exponent: length mismatch");
    if (ns.size() < 3) throw std::invalid_argument("fit_scaling_exponent: need at least 3 points");
    std::vector<double> lx(ns.size()), ly(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(ns[i] > 0.0) || !(costs[i] > 0.0))
            throw std::invalid_argument("fit_scaling_exponent: values must be positive");
        lx[i] = std::log(ns[i]);
        ly[i] = std::log(costs[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (den == 0.0) throw std::invalid_argument("fit_scaling_exponent: degenerate sizes");
    return num / den;
}

namespace detail {

inline std::uint64_t median_ns(std::vector<std::uint64_t>& samples) {
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

}  // namespace detail

/// Compare full-stack 2D argmax decoding against paired 1D argmax decoding
/// on synthetic data: deterministic comparison counts, median wall-clock,
/// and the payload each representation would ship.
inline BenchReport bench_decode(std::span<const int> sizes, int landmarks, int trials) {
    if (sizes.empty()) throw std::invalid_argument("bench_decode: no sizes");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("bench_decode: sizes must be ascending");
    if (sizes.front() < 2) throw std::invalid_argument("bench_decode: sizes must be >= 2");
    if (landmarks <= 0) throw std::invalid_argument("bench_decode: landmarks must be positive");
    if (trials < 3) throw std::invalid_argument("bench_decode: need at least 3 trials");

    BenchReport report;
    report.landmarks = landmarks;
    report.trials = trials;
    for (int n : sizes) {
        // One synthetic channel reused across landmarks; argmax cost does not
        // depend on the content.
        SynthSpec spec;
        spec.width = n;
        spec.height = n;
        spec.pos = {static_cast<double>(n) / 2.0, static_cast<double>(n) / 2.0};
        spec.noise_amplitude = 0.05;
        spec.seed = static_cast<std::uint64_t>(n);
        const Heatmap grid = synth_heatmap(spec);
        const GaussianVectorPair pair = synth_vector_pair(spec);

        BenchEntry entry;
        entry.n = n;
        const auto ln = static_cast<std::uint64_t>(landmarks) * static_cast<std::uint64_t>(n);
        entry.bytes_2d = ln * static_cast<std::uint64_t>(n) * 4;
        entry.bytes_vec = ln * 2 * 4;

        for (int l = 0; l < landmarks; ++l) {
            entry.ops_2d += counted_argmax(grid.values).comparisons;
            entry.ops_vec += counted_argmax(pair.x).comparisons + counted_argmax(pair.y).comparisons;
        }

        std::vector<std::uint64_t> wall_2d, wall_vec;
        wall_2d.reserve(static_cast<std::size_t>(trials));
        wall_vec.reserve(static_cast<std::size_t>(trials));
        volatile std::size_t sink = 0;  // keep the argmax loops observable
        for (int t = 0; t < trials; ++t) {
            auto t0 = std::chrono::steady_clock::now();
            for (int l = 0; l < landmarks; ++l) sink = sink + counted_argmax(grid.values).index;
            auto t1 = std::chrono::steady_clock::now();
            for (int l = 0; l < landmarks; ++l)
                sink = sink + counted_argmax(pair.x).index + counted_argmax(pair.y).index;
            auto t2 = std::chrono::steady_clock::now();
            wall_2d.push_back(static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
            wall_vec.push_back(static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t2 - t1).count()));
        }
        entry.wall_2d_ns = detail::median_ns(wall_2d);
        entry.wall_vec_ns = detail::median_ns(wall_vec);
        report.entries.push_back(entry);
    }

    std::vector<double> ns_d, ops2, opsv;
    for (const auto& e : report.entries) {
        ns_d.push_back(static_cast<double>(e.n));
        ops2.push_back(static_cast<double>(e.ops_2d));
        opsv.push_back(static_cast<double>(e.ops_vec));
    }
    if (ns_d.size() >= 3) {
        report.exponent_2d = fit_scaling_exponent(ns_d, ops2);
        report.exponent_vec = fit_scaling_exponent(ns_d, opsv);
    }
    return report;
}

}  // namespace gvec
