// Shared domain types: points, landmark sets, response grids.
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace gvec {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Coordinate system a landmark set lives in.
enum class CoordSpace { image, crop, heatmap };

struct LandmarkSet {
    std::vector<Point2> points;
    CoordSpace space = CoordSpace::image;

    std::size_t size() const { return points.size(); }
};

struct GridSize {
    int width = 0;
    int height = 0;
};

// Single-channel response grid, row-major.
struct Heatmap {
    int height = 0;
    int width = 0;
    std::vector<float> values;  // height*width

    float at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)];
    }
    float& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)];
    }
};

// L channels of h*w responses in one contiguous buffer, channel-major.
struct HeatmapStack {
    int landmarks = 0;
    int height = 0;
    int width = 0;
    std::vector<float> values;  // landmarks*height*width

    std::size_t channel_size() const {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    std::span<const float> channel(int l) const {
        if (l < 0 || l >= landmarks) throw std::out_of_range("HeatmapStack: channel index out of range");
        return {values.data() + static_cast<std::size_t>(l) * channel_size(), channel_size()};
    }
    std::span<float> channel(int l) {
        if (l < 0 || l >= landmarks) throw std::out_of_range("HeatmapStack: channel index out of range");
        return {values.data() + static_cast<std::size_t>(l) * channel_size(), channel_size()};
    }
    void validate() const {
        if (landmarks <= 0 || height <= 0 || width <= 0)
            throw std::invalid_argument("HeatmapStack: dimensions must be positive");
        if (values.size() != static_cast<std::size_t>(landmarks) * channel_size())
            throw std::invalid_argument("HeatmapStack: value buffer length does not match dimensions");
    }
};

}  // namespace gvec
