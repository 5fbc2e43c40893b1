#pragma once

// Kuhn-Munkres with row/column potentials (shortest augmenting paths),
// O(n^3) for an n x n cost matrix.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace topoloss {

struct Assignment {
    std::vector<int> column_of_row;
    double cost = 0.0;
};

/// Minimum-cost perfect assignment for a square row-major cost matrix.
/// Deterministic for a given input. `cost` is summed over rows in order.
inline Assignment solve_assignment(std::span<const double> cost, int n) {
    if (n < 0 || cost.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw std::invalid_argument("assignment cost matrix must be n x n");
    Assignment out;
    out.column_of_row.assign(static_cast<std::size_t>(n), -1);
    if (n == 0)
        return out;

    const double inf = std::numeric_limits<double>::infinity();
    const auto un = static_cast<std::size_t>(n);
    auto a = [&](int i, int j) { return cost[static_cast<std::size_t>(i - 1) * un + static_cast<std::size_t>(j - 1)]; };

    // 1-based; row_of[j] is the row matched to column j, column 0 is a sentinel.
    std::vector<double> u(un + 1, 0.0), v(un + 1, 0.0), min_slack(un + 1);
    std::vector<int> row_of(un + 1, 0), way(un + 1, 0);
    std::vector<char> used(un + 1);

    for (int i = 1; i <= n; ++i) {
        row_of[0] = i;
        int j0 = 0;
        std::fill(min_slack.begin(), min_slack.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = row_of[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                if (used[uj])
                    continue;
                const double cur = a(i0, j) - u[static_cast<std::size_t>(i0)] - v[uj];
                if (cur < min_slack[uj]) {
                    min_slack[uj] = cur;
                    way[uj] = j0;
                }
                if (min_slack[uj] < delta) {
                    delta = min_slack[uj];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                if (used[uj]) {
                    u[static_cast<std::size_t>(row_of[uj])] += delta;
                    v[uj] -= delta;
                } else {
                    min_slack[uj] -= delta;
                }
            }
            j0 = j1;
        } while (row_of[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            row_of[static_cast<std::size_t>(j0)] = row_of[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    for (int j = 1; j <= n; ++j)
        out.column_of_row[static_cast<std::size_t>(row_of[static_cast<std::size_t>(j)] - 1)] = j - 1;
    for (int i = 0; i < n; ++i)
        out.cost += cost[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(out.column_of_row[static_cast<std::size_t>(i)])];
    return out;
}

} // namespace topoloss
