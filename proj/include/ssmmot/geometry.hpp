// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <cmath>

namespace ssmmot {

/// Axis-aligned box, top-left corner + size, in pixels. The unit of all
/// geometry in MOTChallenge files and tracker state.
struct BBox {
    double x = 0.0;  // left edge
    double y = 0.0;  // top edge
    double w = 0.0;
    double h = 0.0;
};

/// Center-form box normalized by image size; the model-space representation.
struct NormBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
};

struct ImageSize {
    int width = 0;
    int height = 0;
};

inline bool is_valid(const BBox& b) {
    return std::isfinite(b.x) && std::isfinite(b.y) && b.w > 0.0 && b.h > 0.0 &&
           std::isfinite(b.w) && std::isfinite(b.h);
}

inline bool is_valid(const NormBox& b) {
    return std::isfinite(b.cx) && std::isfinite(b.cy) && b.w > 0.0 && b.h > 0.0 &&
           std::isfinite(b.w) && std::isfinite(b.h);
}

inline bool is_valid(const ImageSize& s) { return s.width >= 1 && s.height >= 1; }

/// Intersection over union, in [0, 1].
double iou(const BBox& a, const BBox& b);

/// Generalized IoU: iou minus the enclosing-box penalty, in (-1, 1].
double giou(const BBox& a, const BBox& b);

NormBox to_norm(const BBox& b, const ImageSize& img);
BBox from_norm(const NormBox& n, const ImageSize& img);

/// Center of a box in pixels.
inline double center_x(const BBox& b) { return b.x + 0.5 * b.w; }
inline double center_y(const BBox& b) { return b.y + 0.5 * b.h; }

}  // namespace ssmmot
