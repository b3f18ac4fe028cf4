// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#pragma once

#include <vector>

namespace ssmmot {

struct Assignment {
    std::vector<int> row_to_col;  // -1 = unmatched
    std::vector<int> col_to_row;  // -1 = unmatched
    double cost = 0.0;            // sum over matched finite entries
};

/// Minimum-cost assignment on a rectangular matrix. Entries of +infinity mark
/// forbidden pairs and are never assigned. The solution has maximum
/// cardinality over allowed pairs and, among those, minimum total cost.
/// Rows/columns that cannot be matched are left unmatched.
Assignment hungarian(const std::vector<std::vector<double>>& cost);

}  // namespace ssmmot
