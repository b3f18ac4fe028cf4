// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <string>
#include <vector>

#include "ssmmot/geometry.hpp"

namespace ssmmot {

/// One MOTChallenge CSV row:
/// frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z
struct MotFrameRecord {
    int frame = 0;
    int id = -1;  // -1 for raw detections
    BBox bbox;
    double conf = 1.0;
    double x = -1.0;
    double y = -1.0;
    double z = -1.0;
};

std::vector<MotFrameRecord> parse_mot(const std::string& path);
std::vector<MotFrameRecord> parse_mot_text(const std::string& text);

void write_mot(const std::vector<MotFrameRecord>& records, const std::string& path);
std::string format_mot(const std::vector<MotFrameRecord>& records);

/// Shortest decimal form that parses back to the same double.
std::string format_shortest(double v);

/// Sequence sidecar: plain text `width=`, `height=`, `frames=` lines.
struct SeqInfo {
    ImageSize image;
    int frames = 0;
};

SeqInfo read_seqinfo(const std::string& dir);
void write_seqinfo(const SeqInfo& info, const std::string& dir);

inline constexpr const char* kSeqInfoFile = "seqinfo.txt";

}  // namespace ssmmot
