// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

namespace ssmmot {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ssmmot
