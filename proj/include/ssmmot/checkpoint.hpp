// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <string>

#include "ssmmot/model.hpp"

namespace ssmmot {

inline constexpr const char* kCheckpointHeader = "ssmmot-ckpt v1";

/// Line-oriented text checkpoint: header, a `config` record, one record per
/// tensor (`name dims d1 [d2] : values...`, row-major, full-precision
/// decimal), then `sha256 <hex>` over all preceding bytes.
void save_checkpoint(const std::string& path, const ModelParams& params,
                     const ModelConfig& cfg);

struct Checkpoint {
    ModelConfig cfg;
    ModelParams params;
};

/// Loads and verifies a checkpoint. Throws ParseError on malformed records
/// and on digest mismatch. load(save(p)) reproduces every value bit-exactly.
Checkpoint load_checkpoint(const std::string& path);

/// %.17g — the shortest fixed precision that round-trips every double.
std::string format_full(double v);

/// Lowercase SHA-256 hex digest.
std::string sha256_hex(const std::string& data);

}  // namespace ssmmot
