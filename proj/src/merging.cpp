// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/merging.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "ssmmot/errors.hpp"

namespace ssmmot {

ExtractResult extract_embeddings(const std::vector<MotFrameRecord>& results,
                                 const ModelParams& params, const ModelConfig& cfg,
                                 const ImageSize& img) {
    std::map<int, std::vector<MotFrameRecord>> by_id;
    for (const auto& r : results) by_id[r.id].push_back(r);

    ExtractResult out;
    const std::int64_t calls_before = model_forward_call_count();
    for (auto& [id, rows] : by_id) {
        std::sort(rows.begin(), rows.end(),
                  [](const MotFrameRecord& a, const MotFrameRecord& b) {
                      return a.frame < b.frame;
                  });
        TrackletRecord rec;
        rec.id = id;
        rec.first_frame = rows.front().frame;
        rec.last_frame = rows.back().frame;

        // Bridge interior gaps so boxes cover the whole span.
        rec.boxes.reserve(rec.last_frame - rec.first_frame + 1);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i > 0) {
                const int gap = rows[i].frame - rows[i - 1].frame;
                for (int s = 1; s < gap; ++s) {
                    const double t = double(s) / double(gap);
                    const BBox& a = rows[i - 1].bbox;
                    const BBox& b = rows[i].bbox;
                    rec.boxes.push_back(BBox{a.x + t * (b.x - a.x),
                                             a.y + t * (b.y - a.y),
                                             a.w + t * (b.w - a.w),
                                             a.h + t * (b.h - a.h)});
                }
            }
            rec.boxes.push_back(rows[i].bbox);
        }

        if (rec.boxes.size() < 2) {
            out.excluded_ids.push_back(id);
            continue;
        }

        const int take =
            std::min<int>(cfg.max_len, static_cast<int>(rec.boxes.size()));
        std::vector<NormBox> window;
        window.reserve(take);
        for (std::size_t i = rec.boxes.size() - take; i < rec.boxes.size(); ++i) {
            window.push_back(to_norm(rec.boxes[i], img));
        }
        const ForwardResult res = model_forward(window, params, cfg);
        rec.embedding = res.embedding;
        out.records.push_back(std::move(rec));
    }
    out.forward_passes = model_forward_call_count() - calls_before;
    return out;
}

GateResult gated_distance(const TrackletRecord& a, const TrackletRecord& b,
                          const MergeConfig& cfg) {
    GateResult out;
    // Two tracklets alive in the same frame cannot share an identity.
    if (a.first_frame <= b.last_frame && b.first_frame <= a.last_frame) {
        out.status = GateStatus::Overlap;
        return out;
    }
    const TrackletRecord& earlier = a.last_frame < b.first_frame ? a : b;
    const TrackletRecord& later = a.last_frame < b.first_frame ? b : a;
    const int gap = later.first_frame - earlier.last_frame;
    if (gap > cfg.max_gap) {
        out.status = GateStatus::GapTooLarge;
        return out;
    }
    const BBox& tail = earlier.boxes.back();
    const BBox& head = later.boxes.front();
    const double dx = center_x(tail) - center_x(head);
    const double dy = center_y(tail) - center_y(head);
    if (std::sqrt(dx * dx + dy * dy) > cfg.max_dist) {
        out.status = GateStatus::TooFarApart;
        return out;
    }
    out.distance = 1.0 - a.embedding.dot(b.embedding);
    return out;
}

std::vector<std::vector<int>> cluster(const std::vector<TrackletRecord>& records,
                                      const MergeConfig& cfg) {
    const int n = static_cast<int>(records.size());
    constexpr double kForbidden = std::numeric_limits<double>::infinity();

    std::vector<std::vector<double>> dist(n, std::vector<double>(n, kForbidden));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const GateResult g = gated_distance(records[i], records[j], cfg);
            if (g.status == GateStatus::Ok) {
                dist[i][j] = dist[j][i] = g.distance;
            }
        }
    }

    std::vector<std::vector<int>> clusters(n);  // member indices into records
    for (int i = 0; i < n; ++i) clusters[i] = {i};

    auto smallest_id = [&](const std::vector<int>& members) {
        int best = std::numeric_limits<int>::max();
        for (int m : members) best = std::min(best, records[m].id);
        return best;
    };

    while (clusters.size() > 1) {
        double best_dist = kForbidden;
        int best_a = -1, best_b = -1;
        int best_lo = 0, best_hi = 0;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                // Average linkage; any forbidden cross pair forbids the merge.
                double sum = 0.0;
                bool ok = true;
                for (int i : clusters[a]) {
                    for (int j : clusters[b]) {
                        if (!std::isfinite(dist[i][j])) {
                            ok = false;
                            break;
                        }
                        sum += dist[i][j];
                    }
                    if (!ok) break;
                }
                if (!ok) continue;
                const double avg =
                    sum / double(clusters[a].size() * clusters[b].size());
                int lo = smallest_id(clusters[a]), hi = smallest_id(clusters[b]);
                if (lo > hi) std::swap(lo, hi);
                const bool better =
                    avg < best_dist ||
                    (avg == best_dist && (lo < best_lo || (lo == best_lo && hi < best_hi)));
                if (best_a < 0 || better) {
                    best_dist = avg;
                    best_a = static_cast<int>(a);
                    best_b = static_cast<int>(b);
                    best_lo = lo;
                    best_hi = hi;
                }
            }
        }
        if (best_a < 0 || !(best_dist < cfg.tau_cos)) break;
        auto merged = clusters[best_a];
        merged.insert(merged.end(), clusters[best_b].begin(), clusters[best_b].end());
        std::sort(merged.begin(), merged.end());
        clusters.erase(clusters.begin() + best_b);
        clusters[best_a] = std::move(merged);
    }

    std::vector<std::vector<int>> out;
    out.reserve(clusters.size());
    for (const auto& members : clusters) {
        std::vector<int> ids;
        ids.reserve(members.size());
        for (int m : members) ids.push_back(records[m].id);
        std::sort(ids.begin(), ids.end());
        out.push_back(std::move(ids));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MotFrameRecord> apply_merge(const std::vector<MotFrameRecord>& results,
                                        const std::vector<std::vector<int>>& partition) {
    std::map<int, int> relabel;
    for (const auto& members : partition) {
        const int target = *std::min_element(members.begin(), members.end());
        for (int id : members) relabel[id] = target;
    }

    // Same-cluster tracklets must not coexist in any frame.
    std::map<int, std::set<int>> frames_per_label;
    for (const auto& r : results) {
        const auto it = relabel.find(r.id);
        const int label = it != relabel.end() ? it->second : r.id;
        if (!frames_per_label[label].insert(r.frame).second) {
            throw OverlapViolation("merged tracklets share frame " +
                                   std::to_string(r.frame));
        }
    }

    std::vector<MotFrameRecord> out = results;
    for (auto& r : out) {
        const auto it = relabel.find(r.id);
        if (it != relabel.end()) r.id = it->second;
    }
    std::sort(out.begin(), out.end(),
              [](const MotFrameRecord& a, const MotFrameRecord& b) {
                  return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
              });
    return out;
}

}  // namespace ssmmot
