// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/mot_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ssmmot/errors.hpp"

namespace ssmmot {

std::string format_shortest(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

double parse_field(const std::string& tok, int line_no, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ParseError(line_no, std::string("bad ") + what + ": '" + tok + "'");
    }
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r' && ch != ' ') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::vector<MotFrameRecord> parse_mot_text(const std::string& text) {
    std::vector<MotFrameRecord> records;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv(line);
        if (fields.size() != 10) {
            throw ParseError(line_no, "expected 10 fields, got " +
                                          std::to_string(fields.size()));
        }
        MotFrameRecord rec;
        rec.frame = static_cast<int>(parse_field(fields[0], line_no, "frame"));
        rec.id = static_cast<int>(parse_field(fields[1], line_no, "id"));
        rec.bbox.x = parse_field(fields[2], line_no, "bb_left");
        rec.bbox.y = parse_field(fields[3], line_no, "bb_top");
        rec.bbox.w = parse_field(fields[4], line_no, "bb_width");
        rec.bbox.h = parse_field(fields[5], line_no, "bb_height");
        rec.conf = parse_field(fields[6], line_no, "conf");
        rec.x = parse_field(fields[7], line_no, "x");
        rec.y = parse_field(fields[8], line_no, "y");
        rec.z = parse_field(fields[9], line_no, "z");
        if (rec.frame < 1) throw ParseError(line_no, "frame must be >= 1");
        if (rec.bbox.w <= 0.0 || rec.bbox.h <= 0.0) {
            throw ParseError(line_no, "degenerate box (w or h <= 0)");
        }
        records.push_back(rec);
    }
    return records;
}

std::vector<MotFrameRecord> parse_mot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("parse_mot: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mot_text(buf.str());
}

std::string format_mot(const std::vector<MotFrameRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += std::to_string(r.frame);
        out += ',';
        out += std::to_string(r.id);
        out += ',';
        out += format_shortest(r.bbox.x);
        out += ',';
        out += format_shortest(r.bbox.y);
        out += ',';
        out += format_shortest(r.bbox.w);
        out += ',';
        out += format_shortest(r.bbox.h);
        out += ',';
        out += format_shortest(r.conf);
        out += ',';
        out += format_shortest(r.x);
        out += ',';
        out += format_shortest(r.y);
        out += ',';
        out += format_shortest(r.z);
        out += '\n';
    }
    return out;
}

void write_mot(const std::vector<MotFrameRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_mot: cannot open " + path);
    out << format_mot(records);
    if (!out) throw std::runtime_error("write_mot: write failed: " + path);
}

SeqInfo read_seqinfo(const std::string& dir) {
    const std::string path = dir + "/" + kSeqInfoFile;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_seqinfo: cannot open " + path);
    SeqInfo info;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
        const std::string key = line.substr(0, eq);
        const int value = static_cast<int>(
            parse_field(line.substr(eq + 1), line_no, key.c_str()));
        if (key == "width") {
            info.image.width = value;
        } else if (key == "height") {
            info.image.height = value;
        } else if (key == "frames") {
            info.frames = value;
        } else {
            throw ParseError(line_no, "unknown key: " + key);
        }
    }
    if (!is_valid(info.image) || info.frames < 1) {
        throw std::runtime_error("read_seqinfo: incomplete seqinfo in " + dir);
    }
    return info;
}

void write_seqinfo(const SeqInfo& info, const std::string& dir) {
    const std::string path = dir + "/" + kSeqInfoFile;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_seqinfo: cannot open " + path);
    out << "width=" << info.image.width << "\n"
        << "height=" << info.image.height << "\n"
        << "frames=" << info.frames << "\n";
}

}  // namespace ssmmot
