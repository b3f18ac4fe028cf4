// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "ssmmot/assignment.hpp"
#include "ssmmot/geometry.hpp"

namespace ssmmot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kClearIouThreshold = 0.5;

struct FrameEntry {
    int id;
    BBox box;
};

// frame -> entries, ids in first-appearance order within the frame.
using FrameMap = std::map<int, std::vector<FrameEntry>>;

FrameMap group_by_frame(const std::vector<MotFrameRecord>& records) {
    FrameMap out;
    for (const auto& r : records) out[r.frame].push_back({r.id, r.bbox});
    return out;
}

std::map<int, long> id_counts(const std::vector<MotFrameRecord>& records) {
    std::map<int, long> out;
    for (const auto& r : records) ++out[r.id];
    return out;
}

}  // namespace

ClearResult mota(const std::vector<MotFrameRecord>& gt,
                 const std::vector<MotFrameRecord>& res) {
    const FrameMap gt_frames = group_by_frame(gt);
    const FrameMap res_frames = group_by_frame(res);

    ClearResult out;
    out.gt_count = static_cast<long>(gt.size());

    std::set<int> frames;
    for (const auto& [f, _] : gt_frames) frames.insert(f);
    for (const auto& [f, _] : res_frames) frames.insert(f);

    std::map<int, int> prev_match;  // gt id -> res id matched in previous frame
    std::map<int, int> last_match;  // gt id -> most recent matched res id

    static const std::vector<FrameEntry> kEmpty;
    for (int frame : frames) {
        const auto git = gt_frames.find(frame);
        const auto rit = res_frames.find(frame);
        const auto& gts = git != gt_frames.end() ? git->second : kEmpty;
        const auto& ress = rit != res_frames.end() ? rit->second : kEmpty;

        std::vector<bool> gt_used(gts.size(), false), res_used(ress.size(), false);
        std::map<int, int> matches;

        // Continuity: keep last frame's pairs while they still overlap.
        for (std::size_t i = 0; i < gts.size(); ++i) {
            const auto pit = prev_match.find(gts[i].id);
            if (pit == prev_match.end()) continue;
            for (std::size_t j = 0; j < ress.size(); ++j) {
                if (res_used[j] || ress[j].id != pit->second) continue;
                if (iou(gts[i].box, ress[j].box) >= kClearIouThreshold) {
                    gt_used[i] = true;
                    res_used[j] = true;
                    matches[gts[i].id] = ress[j].id;
                }
                break;
            }
        }

        // Hungarian on the rest, gated at the CLEAR threshold.
        std::vector<int> free_gt, free_res;
        for (std::size_t i = 0; i < gts.size(); ++i) {
            if (!gt_used[i]) free_gt.push_back(static_cast<int>(i));
        }
        for (std::size_t j = 0; j < ress.size(); ++j) {
            if (!res_used[j]) free_res.push_back(static_cast<int>(j));
        }
        if (!free_gt.empty() && !free_res.empty()) {
            std::vector<std::vector<double>> cost(
                free_gt.size(), std::vector<double>(free_res.size(), kInf));
            for (std::size_t a = 0; a < free_gt.size(); ++a) {
                for (std::size_t b = 0; b < free_res.size(); ++b) {
                    const double v = iou(gts[free_gt[a]].box, ress[free_res[b]].box);
                    if (v >= kClearIouThreshold) cost[a][b] = 1.0 - v;
                }
            }
            const Assignment asg = hungarian(cost);
            for (std::size_t a = 0; a < free_gt.size(); ++a) {
                if (asg.row_to_col[a] < 0) continue;
                const auto& g = gts[free_gt[a]];
                const auto& r = ress[free_res[asg.row_to_col[a]]];
                matches[g.id] = r.id;
            }
        }

        out.fn += static_cast<long>(gts.size() - matches.size());
        out.fp += static_cast<long>(ress.size() - matches.size());
        for (const auto& [gid, rid] : matches) {
            const auto lit = last_match.find(gid);
            if (lit != last_match.end() && lit->second != rid) ++out.idsw;
            last_match[gid] = rid;
        }
        prev_match = matches;
    }

    out.mota = out.gt_count > 0
                   ? 1.0 - double(out.fn + out.fp + out.idsw) / double(out.gt_count)
                   : 1.0;
    return out;
}

double idf1(const std::vector<MotFrameRecord>& gt,
            const std::vector<MotFrameRecord>& res) {
    if (gt.empty() && res.empty()) return 1.0;
    if (gt.empty() || res.empty()) return 0.0;

    const auto gt_ids = id_counts(gt);
    const auto res_ids = id_counts(res);
    std::map<int, int> gt_index, res_index;
    for (const auto& [id, _] : gt_ids) {
        const int k = static_cast<int>(gt_index.size());
        gt_index[id] = k;
    }
    for (const auto& [id, _] : res_ids) {
        const int k = static_cast<int>(res_index.size());
        res_index[id] = k;
    }

    // Per-identity-pair overlap counts at IoU >= 0.5.
    std::vector<std::vector<long>> overlap(gt_index.size(),
                                           std::vector<long>(res_index.size(), 0));
    const FrameMap gt_frames = group_by_frame(gt);
    const FrameMap res_frames = group_by_frame(res);
    for (const auto& [frame, gts] : gt_frames) {
        const auto rit = res_frames.find(frame);
        if (rit == res_frames.end()) continue;
        for (const auto& g : gts) {
            for (const auto& r : rit->second) {
                if (iou(g.box, r.box) >= kClearIouThreshold) {
                    ++overlap[gt_index[g.id]][res_index[r.id]];
                }
            }
        }
    }

    // Maximize total matched overlap = minimize its negation.
    std::vector<std::vector<double>> cost(
        gt_index.size(), std::vector<double>(res_index.size(), 0.0));
    for (std::size_t i = 0; i < gt_index.size(); ++i) {
        for (std::size_t j = 0; j < res_index.size(); ++j) {
            cost[i][j] = -double(overlap[i][j]);
        }
    }
    const Assignment asg = hungarian(cost);
    long idtp = 0;
    for (std::size_t i = 0; i < gt_index.size(); ++i) {
        if (asg.row_to_col[i] >= 0) idtp += overlap[i][asg.row_to_col[i]];
    }
    return 2.0 * double(idtp) / double(gt.size() + res.size());
}

HotaResult hota(const std::vector<MotFrameRecord>& gt,
                const std::vector<MotFrameRecord>& res) {
    HotaResult out;
    if (gt.empty() && res.empty()) return HotaResult{1.0, 1.0, 1.0};
    if (gt.empty() || res.empty()) return out;

    const auto gt_ids = id_counts(gt);
    const auto res_ids = id_counts(res);
    std::map<int, int> gt_index, res_index;
    std::vector<long> gt_count, res_count;
    for (const auto& [id, n] : gt_ids) {
        gt_index[id] = static_cast<int>(gt_count.size());
        gt_count.push_back(n);
    }
    for (const auto& [id, n] : res_ids) {
        res_index[id] = static_cast<int>(res_count.size());
        res_count.push_back(n);
    }
    const std::size_t n_gt = gt_count.size(), n_res = res_count.size();

    const FrameMap gt_frames = group_by_frame(gt);
    const FrameMap res_frames = group_by_frame(res);
    std::set<int> frames;
    for (const auto& [f, _] : gt_frames) frames.insert(f);
    for (const auto& [f, _] : res_frames) frames.insert(f);

    double hota_sum = 0.0, deta_sum = 0.0, assa_sum = 0.0;
    int n_alpha = 0;
    static const std::vector<FrameEntry> kEmpty;
    for (int ai = 1; ai <= 19; ++ai) {
        const double alpha = 0.05 * ai;

        // Pass 1: potential per-pair matches at this gate, for the global
        // alignment score that steers the per-frame matching.
        std::vector<std::vector<long>> potential(n_gt, std::vector<long>(n_res, 0));
        for (const auto& [frame, gts] : gt_frames) {
            const auto rit = res_frames.find(frame);
            if (rit == res_frames.end()) continue;
            for (const auto& g : gts) {
                for (const auto& r : rit->second) {
                    if (iou(g.box, r.box) >= alpha) {
                        ++potential[gt_index.at(g.id)][res_index.at(r.id)];
                    }
                }
            }
        }
        std::vector<std::vector<double>> align(n_gt, std::vector<double>(n_res, 0.0));
        for (std::size_t i = 0; i < n_gt; ++i) {
            for (std::size_t j = 0; j < n_res; ++j) {
                align[i][j] = double(potential[i][j]) /
                              double(gt_count[i] + res_count[j] - potential[i][j]);
            }
        }

        // Pass 2: per-frame matching maximizing alignment-weighted IoU.
        std::vector<std::vector<long>> matched(n_gt, std::vector<long>(n_res, 0));
        long tp = 0, fn = 0, fp = 0;
        for (int frame : frames) {
            const auto git = gt_frames.find(frame);
            const auto rit = res_frames.find(frame);
            const auto& gts = git != gt_frames.end() ? git->second : kEmpty;
            const auto& ress = rit != res_frames.end() ? rit->second : kEmpty;
            long frame_tp = 0;
            if (!gts.empty() && !ress.empty()) {
                std::vector<std::vector<double>> cost(
                    gts.size(), std::vector<double>(ress.size(), kInf));
                for (std::size_t i = 0; i < gts.size(); ++i) {
                    for (std::size_t j = 0; j < ress.size(); ++j) {
                        const double v = iou(gts[i].box, ress[j].box);
                        if (v >= alpha) {
                            cost[i][j] = -align[gt_index.at(gts[i].id)]
                                               [res_index.at(ress[j].id)] *
                                         v;
                        }
                    }
                }
                const Assignment asg = hungarian(cost);
                for (std::size_t i = 0; i < gts.size(); ++i) {
                    const int j = asg.row_to_col[i];
                    if (j < 0) continue;
                    ++matched[gt_index.at(gts[i].id)][res_index.at(ress[j].id)];
                    ++frame_tp;
                }
            }
            tp += frame_tp;
            fn += static_cast<long>(gts.size()) - frame_tp;
            fp += static_cast<long>(ress.size()) - frame_tp;
        }

        const double det_a = tp + fn + fp > 0 ? double(tp) / double(tp + fn + fp) : 0.0;
        double ass_sum = 0.0;
        for (std::size_t i = 0; i < n_gt; ++i) {
            for (std::size_t j = 0; j < n_res; ++j) {
                if (matched[i][j] == 0) continue;
                const double a =
                    double(matched[i][j]) /
                    double(gt_count[i] + res_count[j] - matched[i][j]);
                ass_sum += double(matched[i][j]) * a;
            }
        }
        const double ass_a = tp > 0 ? ass_sum / double(tp) : 0.0;
        deta_sum += det_a;
        assa_sum += ass_a;
        hota_sum += std::sqrt(det_a * ass_a);
        ++n_alpha;
    }

    out.det_a = deta_sum / n_alpha;
    out.ass_a = assa_sum / n_alpha;
    out.hota = hota_sum / n_alpha;
    return out;
}

MetricReport evaluate_all(const std::vector<MotFrameRecord>& gt,
                          const std::vector<MotFrameRecord>& res) {
    MetricReport rep;
    const ClearResult clear = mota(gt, res);
    rep.mota = clear.mota;
    rep.fp = clear.fp;
    rep.fn = clear.fn;
    rep.idsw = clear.idsw;
    rep.gt_count = clear.gt_count;
    rep.idf1 = idf1(gt, res);
    const HotaResult h = hota(gt, res);
    rep.hota = h.hota;
    rep.det_a = h.det_a;
    rep.ass_a = h.ass_a;
    return rep;
}

}  // namespace ssmmot
