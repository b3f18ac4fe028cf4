// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/geometry.hpp"

#include <algorithm>

namespace ssmmot {

double iou(const BBox& a, const BBox& b) {
    const double ix1 = std::max(a.x, b.x);
    const double iy1 = std::max(a.y, b.y);
    const double ix2 = std::min(a.x + a.w, b.x + b.w);
    const double iy2 = std::min(a.y + a.h, b.y + b.h);

    const double iw = std::max(0.0, ix2 - ix1);
    const double ih = std::max(0.0, iy2 - iy1);
    const double inter = iw * ih;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return inter / uni;
}

double giou(const BBox& a, const BBox& b) {
    const double ix1 = std::max(a.x, b.x);
    const double iy1 = std::max(a.y, b.y);
    const double ix2 = std::min(a.x + a.w, b.x + b.w);
    const double iy2 = std::min(a.y + a.h, b.y + b.h);
    const double inter = std::max(0.0, ix2 - ix1) * std::max(0.0, iy2 - iy1);
    const double uni = a.w * a.h + b.w * b.h - inter;

    // Smallest enclosing box.
    const double cx1 = std::min(a.x, b.x);
    const double cy1 = std::min(a.y, b.y);
    const double cx2 = std::max(a.x + a.w, b.x + b.w);
    const double cy2 = std::max(a.y + a.h, b.y + b.h);
    const double enclose = (cx2 - cx1) * (cy2 - cy1);

    return inter / uni - (enclose - uni) / enclose;
}

NormBox to_norm(const BBox& b, const ImageSize& img) {
    NormBox n;
    n.cx = (b.x + 0.5 * b.w) / img.width;
    n.cy = (b.y + 0.5 * b.h) / img.height;
    n.w = b.w / img.width;
    n.h = b.h / img.height;
    return n;
}

BBox from_norm(const NormBox& n, const ImageSize& img) {
    BBox b;
    b.w = n.w * img.width;
    b.h = n.h * img.height;
    b.x = n.cx * img.width - 0.5 * b.w;
    b.y = n.cy * img.height - 0.5 * b.h;
    return b;
}

}  // namespace ssmmot
