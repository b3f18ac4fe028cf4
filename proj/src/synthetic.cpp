// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssmmot/rng.hpp"

namespace ssmmot {

MotionKind parse_motion_kind(const std::string& name) {
    if (name == "linear") return MotionKind::Linear;
    if (name == "sinusoid") return MotionKind::Sinusoid;
    if (name == "bounce") return MotionKind::Bounce;
    if (name == "random_walk") return MotionKind::RandomWalk;
    throw std::invalid_argument("unknown motion kind: " + name);
}

std::string motion_kind_name(MotionKind kind) {
    switch (kind) {
        case MotionKind::Linear: return "linear";
        case MotionKind::Sinusoid: return "sinusoid";
        case MotionKind::Bounce: return "bounce";
        case MotionKind::RandomWalk: return "random_walk";
    }
    return "?";
}

namespace {

// Reflects v into [lo, hi].
double reflect(double v, double lo, double hi, double* vel) {
    if (lo >= hi) return 0.5 * (lo + hi);
    while (v < lo || v > hi) {
        if (v < lo) {
            v = 2.0 * lo - v;
            if (vel) *vel = -*vel;
        } else {
            v = 2.0 * hi - v;
            if (vel) *vel = -*vel;
        }
    }
    return v;
}

struct ObjectState {
    double w, h;
    double cx, cy;
    double vx = 0.0, vy = 0.0;
    // sinusoid
    double amp_x = 0.0, amp_y = 0.0, om_x = 0.0, om_y = 0.0, ph_x = 0.0, ph_y = 0.0;
    double anchor_x = 0.0, anchor_y = 0.0;
    // bounce
    int next_turn = 0;
};

}  // namespace

SyntheticResult gen_synthetic(const SyntheticConfig& cfg) {
    if (cfg.objects < 1 || cfg.frames < 1 || !is_valid(cfg.image)) {
        throw std::invalid_argument("gen_synthetic: invalid config");
    }
    if (cfg.occlusion_rate < 0.0 || cfg.occlusion_rate >= 1.0) {
        throw std::invalid_argument("gen_synthetic: occlusion_rate must be in [0,1)");
    }
    Rng rng(cfg.seed);
    const double iw = cfg.image.width;
    const double ih = cfg.image.height;

    SyntheticResult out;
    for (int obj = 0; obj < cfg.objects; ++obj) {
        ObjectState s;
        s.w = rng.uniform(30.0, 70.0);
        s.h = rng.uniform(30.0, 70.0);
        const double mx = 0.5 * s.w + 1.0;
        const double my = 0.5 * s.h + 1.0;

        switch (cfg.kind) {
            case MotionKind::Linear:
                s.cx = rng.uniform(mx, iw - mx);
                s.cy = rng.uniform(my, ih - my);
                s.vx = rng.uniform(-6.0, 6.0);
                s.vy = rng.uniform(-6.0, 6.0);
                break;
            case MotionKind::Sinusoid: {
                // Amplitudes capped so anchor + swing + box always fits.
                s.amp_x = std::min(rng.uniform(20.0, 70.0),
                                   std::max(1.0, 0.5 * (iw - 2.0 * mx) - 1.0));
                s.amp_y = std::min(rng.uniform(20.0, 70.0),
                                   std::max(1.0, 0.5 * (ih - 2.0 * my) - 1.0));
                s.om_x = rng.uniform(2.0 * M_PI / 40.0, 2.0 * M_PI / 12.0);
                s.om_y = rng.uniform(2.0 * M_PI / 40.0, 2.0 * M_PI / 12.0);
                s.ph_x = rng.uniform(0.0, 2.0 * M_PI);
                s.ph_y = rng.uniform(0.0, 2.0 * M_PI);
                s.anchor_x = rng.uniform(mx + s.amp_x, iw - mx - s.amp_x);
                s.anchor_y = rng.uniform(my + s.amp_y, ih - my - s.amp_y);
                s.vx = rng.uniform(-1.5, 1.5);  // anchor drift
                s.vy = rng.uniform(-1.5, 1.5);
                break;
            }
            case MotionKind::Bounce: {
                s.cx = rng.uniform(mx, iw - mx);
                s.cy = rng.uniform(my, ih - my);
                const double speed = rng.uniform(3.0, 9.0);
                const double ang = rng.uniform(0.0, 2.0 * M_PI);
                s.vx = speed * std::cos(ang);
                s.vy = speed * std::sin(ang);
                s.next_turn = static_cast<int>(rng.uniform_int(10, 30));
                break;
            }
            case MotionKind::RandomWalk:
                s.cx = rng.uniform(mx, iw - mx);
                s.cy = rng.uniform(my, ih - my);
                break;
        }

        for (int f = 1; f <= cfg.frames; ++f) {
            switch (cfg.kind) {
                case MotionKind::Linear:
                    s.cx = reflect(s.cx + s.vx, mx, iw - mx, &s.vx);
                    s.cy = reflect(s.cy + s.vy, my, ih - my, &s.vy);
                    break;
                case MotionKind::Sinusoid:
                    s.anchor_x = reflect(s.anchor_x + s.vx, mx + s.amp_x,
                                         iw - mx - s.amp_x, &s.vx);
                    s.anchor_y = reflect(s.anchor_y + s.vy, my + s.amp_y,
                                         ih - my - s.amp_y, &s.vy);
                    s.cx = s.anchor_x + s.amp_x * std::sin(s.om_x * f + s.ph_x);
                    s.cy = s.anchor_y + s.amp_y * std::cos(s.om_y * f + s.ph_y);
                    break;
                case MotionKind::Bounce:
                    if (--s.next_turn <= 0) {
                        const double speed = rng.uniform(3.0, 9.0);
                        const double ang = rng.uniform(0.0, 2.0 * M_PI);
                        s.vx = speed * std::cos(ang);
                        s.vy = speed * std::sin(ang);
                        s.next_turn = static_cast<int>(rng.uniform_int(10, 30));
                    }
                    s.cx = reflect(s.cx + s.vx, mx, iw - mx, &s.vx);
                    s.cy = reflect(s.cy + s.vy, my, ih - my, &s.vy);
                    break;
                case MotionKind::RandomWalk:
                    s.cx = std::clamp(s.cx + rng.normal(0.0, 3.0), mx, iw - mx);
                    s.cy = std::clamp(s.cy + rng.normal(0.0, 3.0), my, ih - my);
                    break;
            }
            MotFrameRecord rec;
            rec.frame = f;
            rec.id = obj + 1;
            rec.bbox = BBox{s.cx - 0.5 * s.w, s.cy - 0.5 * s.h, s.w, s.h};
            rec.conf = 1.0;
            out.gt.push_back(rec);
        }
    }

    // Detections: noisy copies of the GT rows, in the same draw order.
    for (const auto& g : out.gt) {
        if (rng.bernoulli(cfg.occlusion_rate)) continue;
        MotFrameRecord det = g;
        det.id = -1;
        if (cfg.det_noise_std > 0.0) {
            det.bbox.x += rng.normal(0.0, cfg.det_noise_std);
            det.bbox.y += rng.normal(0.0, cfg.det_noise_std);
            det.bbox.w = std::max(1.0, det.bbox.w + rng.normal(0.0, cfg.det_noise_std));
            det.bbox.h = std::max(1.0, det.bbox.h + rng.normal(0.0, cfg.det_noise_std));
        }
        det.conf = rng.bernoulli(cfg.low_conf_fraction) ? rng.uniform(0.1, 0.6)
                                                        : rng.uniform(0.5, 1.0);
        out.detections.push_back(det);
    }

    auto by_frame = [](const MotFrameRecord& a, const MotFrameRecord& b) {
        return a.frame < b.frame;
    };
    std::stable_sort(out.gt.begin(), out.gt.end(), by_frame);
    std::stable_sort(out.detections.begin(), out.detections.end(), by_frame);
    return out;
}

}  // namespace ssmmot
