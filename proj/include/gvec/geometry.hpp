// Face-box normalization and the linear transforms among original-image,
// crop, and heatmap coordinate spaces. Boxes stay continuous and are never
// clipped to image bounds.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gvec/types.hpp"

namespace gvec {

struct FaceBox {
    double x = 0.0;  // top-left, original-image pixels
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;

    void validate() const {
        if (!(width > 0.0) || !(height > 0.0))
            throw std::invalid_argument("FaceBox: width and height must be positive");
    }
    Point2 center() const { return {x + width / 2.0, y + height / 2.0}; }
};

/// Extend the short side to match the long side, keeping the center fixed.
inline FaceBox square_box(const FaceBox& b) {
    b.validate();
    const double side = std::max(b.width, b.height);
    const Point2 c = b.center();
    return {c.x - side / 2.0, c.y - side / 2.0, side, side};
}

/// Scale both sides by (1+pct) about the center.
inline FaceBox enlarge_box(const FaceBox& b, double pct) {
    b.validate();
    if (pct < 0.0) throw std::invalid_argument("enlarge_box: pct must be >= 0");
    const double w = b.width * (1.0 + pct);
    const double h = b.height * (1.0 + pct);
    const Point2 c = b.center();
    return {c.x - w / 2.0, c.y - h / 2.0, w, h};
}

// Invertible mapping original image -> crop -> heatmap. The crop resizes the
// square box to input_size and the network downsamples by heatmap_stride;
// both steps are pure linear scaling with no half-pixel offset.
struct CropTransform {
    FaceBox square_box;
    int input_size = 256;
    int heatmap_stride = 4;

    void validate() const {
        square_box.validate();
        if (square_box.width != square_box.height)
            throw std::invalid_argument("CropTransform: box must be square");
        if (input_size <= 0 || heatmap_stride <= 0 || input_size % heatmap_stride != 0)
            throw std::invalid_argument("CropTransform: input_size must be a positive multiple of heatmap_stride");
    }
    int heatmap_side() const { return input_size / heatmap_stride; }
    double scale() const {  // image px per heatmap px
        return square_box.width / static_cast<double>(input_size) * static_cast<double>(heatmap_stride);
    }
};

/// Points outside the box map outside [0, side) on purpose; recovering them
/// is the decoder's beyond-box path.
inline Point2 to_heatmap_space(Point2 p, const CropTransform& t) {
    t.validate();
    const double s = t.scale();
    return {(p.x - t.square_box.x) / s, (p.y - t.square_box.y) / s};
}

inline Point2 to_image_space(Point2 p, const CropTransform& t) {
    t.validate();
    const double s = t.scale();
    return {p.x * s + t.square_box.x, p.y * s + t.square_box.y};
}

}  // namespace gvec
