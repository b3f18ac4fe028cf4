// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <stdexcept>
#include <string>

namespace ssmmot {

struct HistoryTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HistoryTooLong : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteLoss : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FrameMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OverlapViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(int line_number, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + reason),
          line(line_number) {}
    int line;
};

}  // namespace ssmmot
