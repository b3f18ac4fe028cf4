// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include "ssmmot/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssmmot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Jonker-Volgenant shortest augmenting path on a square matrix.
// p[j] holds the row matched to column j (1-indexed, 0 = free).
std::vector<int> solve_square(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j]) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

}  // namespace

Assignment hungarian(const std::vector<std::vector<double>>& cost) {
    const int rows = static_cast<int>(cost.size());
    const int cols = rows > 0 ? static_cast<int>(cost[0].size()) : 0;

    Assignment out;
    out.row_to_col.assign(rows, -1);
    out.col_to_row.assign(cols, -1);
    if (rows == 0 || cols == 0) return out;

    // Pad to square. Forbidden and padded cells share one large finite value;
    // it dominates any achievable finite total, so the solver maximizes the
    // number of allowed matches before minimizing their cost.
    const int n = std::max(rows, cols);
    double max_abs = 1.0;
    for (const auto& row : cost) {
        for (double c : row) {
            if (std::isfinite(c)) max_abs = std::max(max_abs, std::abs(c));
        }
    }
    const double big = 2.0 * n * max_abs + 1.0;

    std::vector<std::vector<double>> padded(n, std::vector<double>(n, big));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (std::isfinite(cost[r][c])) padded[r][c] = cost[r][c];
        }
    }

    const std::vector<int> sol = solve_square(padded);
    for (int r = 0; r < rows; ++r) {
        const int c = sol[r];
        if (c < 0 || c >= cols || !std::isfinite(cost[r][c])) continue;
        out.row_to_col[r] = c;
        out.col_to_row[c] = r;
        out.cost += cost[r][c];
    }
    return out;
}

}  // namespace ssmmot
