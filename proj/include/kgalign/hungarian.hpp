#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgalign {

enum class AssignmentSolver { FourStep, Augmenting };

namespace detail {

// Kuhn's augmenting path search over the zero cells of the reduced matrix.
// Rows and columns are scanned in index order so the matching is
// deterministic.
class ZeroMatching {
public:
    explicit ZeroMatching(std::size_t n)
        : n_(n), row_to_col_(n, -1), col_to_row_(n, -1) {}

    // Grows the matching as far as possible given the current zero set.
    template <typename IsZero>
    void grow(const IsZero& is_zero) {
        for (std::size_t r = 0; r < n_; ++r) {
            if (row_to_col_[r] != -1) continue;
            std::vector<char> visited(n_, 0);
            augment(r, is_zero, visited);
        }
    }

    template <typename IsZero>
    bool augment(std::size_t row, const IsZero& is_zero, std::vector<char>& visited_cols) {
        for (std::size_t c = 0; c < n_; ++c) {
            if (visited_cols[c] || !is_zero(row, c)) continue;
            visited_cols[c] = 1;
            if (col_to_row_[c] == -1 ||
                augment(static_cast<std::size_t>(col_to_row_[c]), is_zero, visited_cols)) {
                row_to_col_[row] = static_cast<int>(c);
                col_to_row_[c] = static_cast<int>(row);
                return true;
            }
        }
        return false;
    }

    std::size_t size() const {
        std::size_t s = 0;
        for (int c : row_to_col_)
            if (c != -1) ++s;
        return s;
    }

    std::vector<int>& row_to_col() { return row_to_col_; }
    std::vector<int>& col_to_row() { return col_to_row_; }

private:
    std::size_t n_;
    std::vector<int> row_to_col_;
    std::vector<int> col_to_row_;
};

// Among all perfect matchings of the zero graph, picks the one whose
// (row -> col) assignment is lexicographically smallest. Every perfect
// matching on tight (zero) cells has the same total cost, so this only
// resolves ties.
template <typename IsZero>
std::vector<int> lexicographic_matching(std::size_t n, const IsZero& is_zero,
                                        ZeroMatching& matching) {
    auto& row_to_col = matching.row_to_col();
    auto& col_to_row = matching.col_to_row();
    std::vector<char> fixed_col(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        int current = row_to_col[r];
        for (std::size_t c = 0; c < static_cast<std::size_t>(current); ++c) {
            if (fixed_col[c] || !is_zero(r, c)) continue;
            // Try to re-route the row that currently owns column c; rows
            // already fixed (index < r) and fixed columns are off limits.
            int displaced = col_to_row[c];
            row_to_col[r] = static_cast<int>(c);
            col_to_row[c] = static_cast<int>(r);
            col_to_row[current] = -1;
            row_to_col[displaced] = -1;
            std::vector<char> visited(fixed_col);
            visited[c] = 1;
            if (matching.augment(static_cast<std::size_t>(displaced), is_zero, visited)) {
                break;  // success: (r, c) is feasible and smaller
            }
            // Roll back.
            row_to_col[displaced] = static_cast<int>(c);
            col_to_row[c] = displaced;
            row_to_col[r] = current;
            col_to_row[current] = static_cast<int>(r);
        }
        fixed_col[static_cast<std::size_t>(row_to_col[r])] = 1;
    }
    return row_to_col;
}

}  // namespace detail

// Exact minimum-cost perfect matching on a square cost matrix, done the
// textbook way: row reduction, column reduction, then repeat {cover all
// zeros with a minimum number of lines; if fewer than N lines suffice,
// subtract the smallest uncovered value from uncovered cells and add it to
// doubly covered ones}. The minimum line cover comes from a maximum
// matching on zero cells (Koenig's construction). Ties between equal-cost
// matchings resolve to the lexicographically smallest row->col assignment.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    if (n == 0) return {};
    for (const auto& row : cost)
        if (row.size() != n)
            throw std::invalid_argument("hungarian: cost matrix must be square");

    std::vector<std::vector<double>> reduced = cost;
    // Step 1: row reduction.
    for (auto& row : reduced) {
        double low = *std::min_element(row.begin(), row.end());
        for (double& v : row) v -= low;
    }
    // Step 2: column reduction.
    for (std::size_t c = 0; c < n; ++c) {
        double low = reduced[0][c];
        for (std::size_t r = 1; r < n; ++r) low = std::min(low, reduced[r][c]);
        if (low > 0)
            for (std::size_t r = 0; r < n; ++r) reduced[r][c] -= low;
    }

    auto is_zero = [&](std::size_t r, std::size_t c) { return reduced[r][c] == 0.0; };
    detail::ZeroMatching matching(n);
    const std::size_t max_adjustments = n * n;  // termination guard
    std::size_t adjustments = 0;

    while (true) {
        // Step 3: a maximum matching of size N means N lines are needed and
        // the starred zeros are the solution.
        matching.grow(is_zero);
        if (matching.size() == n) break;

        // Koenig: from unmatched rows, alternate unmatched-zero / matched
        // edges. Cover = (rows not reached) + (cols reached).
        std::vector<char> row_reached(n, 0), col_reached(n, 0);
        std::vector<std::size_t> queue;
        for (std::size_t r = 0; r < n; ++r)
            if (matching.row_to_col()[r] == -1) {
                row_reached[r] = 1;
                queue.push_back(r);
            }
        while (!queue.empty()) {
            std::size_t r = queue.back();
            queue.pop_back();
            for (std::size_t c = 0; c < n; ++c) {
                if (!is_zero(r, c) || col_reached[c]) continue;
                col_reached[c] = 1;
                int owner = matching.col_to_row()[c];
                if (owner != -1 && !row_reached[static_cast<std::size_t>(owner)]) {
                    row_reached[static_cast<std::size_t>(owner)] = 1;
                    queue.push_back(static_cast<std::size_t>(owner));
                }
            }
        }

        // Step 4: smallest value not covered by any line.
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < n; ++r) {
            if (!row_reached[r]) continue;  // covered row
            for (std::size_t c = 0; c < n; ++c)
                if (!col_reached[c]) smallest = std::min(smallest, reduced[r][c]);
        }
        if (!std::isfinite(smallest) || smallest <= 0.0)
            throw std::logic_error("hungarian: no progress in adjustment step");
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                bool row_covered = !row_reached[r];
                bool col_covered = col_reached[c];
                if (!row_covered && !col_covered) reduced[r][c] -= smallest;
                else if (row_covered && col_covered) reduced[r][c] += smallest;
            }
        if (++adjustments > max_adjustments)
            throw std::logic_error("hungarian: adjustment count exceeded N^2");
    }

    return detail::lexicographic_matching(n, is_zero, matching);
}

// O(N^3) shortest-augmenting-path variant (Jonker-Volgenant style dual
// updates). Same contract: optimal perfect matching, deterministic output.
// Tie cases may differ from hungarian(); totals are always equal.
inline std::vector<int> hungarian_augmenting(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    if (n == 0) return {};
    for (const auto& row : cost)
        if (row.size() != n)
            throw std::invalid_argument("hungarian: cost matrix must be square");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            std::size_t i0 = p[j0], j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
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
            std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
    return row_to_col;
}

inline std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost,
                                         AssignmentSolver solver) {
    return solver == AssignmentSolver::FourStep ? hungarian(cost)
                                                : hungarian_augmenting(cost);
}

inline double assignment_cost(const std::vector<std::vector<double>>& cost,
                              const std::vector<int>& row_to_col) {
    double total = 0.0;
    for (std::size_t r = 0; r < row_to_col.size(); ++r)
        total += cost[r][static_cast<std::size_t>(row_to_col[r])];
    return total;
}

}  // namespace kgalign
