#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

// Fixture directory: ctest exports KGALIGN_TEST_DATA; fall back to the
// source-tree layout for manual runs from the repo root.
inline std::string data_dir() {
    if (const char* env = std::getenv("KGALIGN_TEST_DATA")) return env;
    return "tests/data";
}

inline std::string data_file(const std::string& name) {
    return (std::filesystem::path(data_dir()) / name).string();
}

// Exhaustive reference for square assignment: tries every permutation.
// Only viable to ~8x8, which is all the oracle needs.
inline std::pair<double, std::vector<std::size_t>> brute_force_assignment(
    const std::vector<std::vector<double>>& cost) {
    std::size_t n = cost.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_perm = perm;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += cost[i][perm[i]];
        if (total < best) {
            best = total;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {best, best_perm};
}

}  // namespace testsupport
