#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgalign/alignment.hpp"
#include "kgalign/candidate_table.hpp"
#include "kgalign/hungarian.hpp"
#include "kgalign/parallel.hpp"

namespace kgalign {

// Floor keeps costs finite; -ln(1e-12) doubles as the padding constant.
constexpr double kProbabilityFloor = 1e-12;

inline double to_cost(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("to_cost: probability out of [0,1]");
    return -std::log(std::max(p, kProbabilityFloor));
}

inline double pad_cost() { return to_cost(0.0); }

struct SubSpaceEdge {
    std::string source;
    std::string target;
    double probability = 0.0;
};

// Connected compartment of the thresholded bipartite candidate graph; solved
// independently of all the others.
struct SubSpace {
    std::vector<std::string> sources;  // sorted
    std::vector<std::string> targets;  // sorted
    std::vector<SubSpaceEdge> edges;   // surviving (p >= tau), sorted by (source, target)

    std::size_t side() const { return std::max(sources.size(), targets.size()); }
};

struct Decomposition {
    std::vector<SubSpace> sub_spaces;  // ordered by smallest source id
    std::vector<std::string> orphans;  // sources with no surviving edge, sorted
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace detail

// Drops edges below tau, then groups sources transitively connected through
// shared surviving targets. Sources whose whole candidate list fell below
// tau come back in `orphans` instead of any sub-space.
inline Decomposition decompose(const CandidateTable& table, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::invalid_argument("decompose: tau out of [0,1]");

    std::map<std::string, std::size_t> src_idx, tgt_idx;
    for (const auto& [s, cands] : table.entries()) {
        src_idx.emplace(s, src_idx.size());
        for (const auto& c : cands)
            if (c.probability >= tau) tgt_idx.emplace(c.target, 0);
    }
    {
        std::size_t next = src_idx.size();
        for (auto& [t, idx] : tgt_idx) idx = next++;
    }

    detail::UnionFind uf(src_idx.size() + tgt_idx.size());
    Decomposition out;
    for (const auto& [s, cands] : table.entries()) {
        bool survived = false;
        for (const auto& c : cands) {
            if (c.probability < tau) continue;
            survived = true;
            uf.unite(src_idx.at(s), tgt_idx.at(c.target));
        }
        if (!survived) out.orphans.push_back(s);
    }

    std::map<std::size_t, std::size_t> root_to_slot;
    for (const auto& [s, idx] : src_idx) {
        bool orphan = std::binary_search(out.orphans.begin(), out.orphans.end(), s);
        if (orphan) continue;
        std::size_t root = uf.find(idx);
        auto [it, fresh] = root_to_slot.emplace(root, out.sub_spaces.size());
        if (fresh) out.sub_spaces.emplace_back();
        out.sub_spaces[it->second].sources.push_back(s);
    }
    for (const auto& [t, idx] : tgt_idx) {
        auto it = root_to_slot.find(uf.find(idx));
        if (it != root_to_slot.end()) out.sub_spaces[it->second].targets.push_back(t);
    }
    for (const auto& [s, cands] : table.entries()) {
        if (std::binary_search(out.orphans.begin(), out.orphans.end(), s)) continue;
        auto& space = out.sub_spaces[root_to_slot.at(uf.find(src_idx.at(s)))];
        for (const auto& c : cands)
            if (c.probability >= tau) space.edges.push_back({s, c.target, c.probability});
    }

    // src_idx iterates lexicographically, so sources arrive sorted and the
    // first source of each sub-space is its smallest; slot order already
    // equals smallest-source order.
    for (auto& space : out.sub_spaces)
        std::sort(space.edges.begin(), space.edges.end(),
                  [](const SubSpaceEdge& a, const SubSpaceEdge& b) {
                      return std::tie(a.source, a.target) < std::tie(b.source, b.target);
                  });
    return out;
}

struct CostMatrix {
    std::vector<std::string> rows;  // source ids; indices beyond are padding
    std::vector<std::string> cols;  // target ids; indices beyond are padding
    std::vector<std::vector<double>> cost;
    // probability >= 0 marks a surviving edge; -1 marks pad / removed cells.
    // Membership must not be inferred from cost: an edge with p <= 1e-12
    // costs exactly pad_cost yet is still a real edge.
    std::vector<std::vector<double>> probability;
    double pad = 0.0;

    std::size_t side() const { return cost.size(); }
};

// Square matrix over the sub-space: real cells carry -ln(p), everything else
// (missing edges, padding rows/columns) carries the constant pad cost.
inline CostMatrix build_cost_matrix(const SubSpace& s) {
    if (s.sources.empty() && s.targets.empty())
        throw std::invalid_argument("build_cost_matrix: empty sub-space");
    CostMatrix cm;
    cm.rows = s.sources;
    cm.cols = s.targets;
    cm.pad = pad_cost();
    const std::size_t side = s.side();
    cm.cost.assign(side, std::vector<double>(side, cm.pad));
    cm.probability.assign(side, std::vector<double>(side, -1.0));

    std::map<std::string, std::size_t> row_of, col_of;
    for (std::size_t i = 0; i < cm.rows.size(); ++i) row_of.emplace(cm.rows[i], i);
    for (std::size_t j = 0; j < cm.cols.size(); ++j) col_of.emplace(cm.cols[j], j);
    for (const auto& e : s.edges) {
        std::size_t r = row_of.at(e.source), c = col_of.at(e.target);
        cm.cost[r][c] = to_cost(e.probability);
        cm.probability[r][c] = e.probability;
    }
    return cm;
}

inline std::vector<int> hungarian(const CostMatrix& cm) { return hungarian(cm.cost); }

enum class OrphanMode {
    Top1,  // fall back to the source's best original candidate (may break 1:1)
    Drop   // leave the source unaligned
};

struct JeaOptions {
    double tau = 0.10;
    OrphanMode orphan_mode = OrphanMode::Top1;
    AssignmentSolver solver = AssignmentSolver::FourStep;
    std::size_t workers = 1;
};

struct JeaStats {
    std::size_t sub_spaces = 0;
    std::size_t max_subspace = 0;  // largest matrix side
    std::size_t orphans = 0;       // sources not matched through a solve
    double wall_time_s = 0.0;
};

// Joint alignment: threshold, decompose, solve every sub-space, merge.
// Sources matched onto padding (or left with no surviving edge at all) are
// handled per orphan_mode. Non-orphan output is guaranteed one-to-one.
inline AlignmentSet jea_solve(const CandidateTable& table, const JeaOptions& opts = {},
                              JeaStats* stats = nullptr) {
    auto t0 = std::chrono::steady_clock::now();

    Decomposition dec = decompose(table, opts.tau);

    std::vector<std::vector<AlignedPair>> joint(dec.sub_spaces.size());
    std::vector<std::vector<std::string>> unmatched(dec.sub_spaces.size());
    parallel_for(dec.sub_spaces.size(), opts.workers, [&](std::size_t i) {
        const SubSpace& space = dec.sub_spaces[i];
        CostMatrix cm = build_cost_matrix(space);
        std::vector<int> assign = solve_assignment(cm.cost, opts.solver);
        for (std::size_t r = 0; r < cm.rows.size(); ++r) {
            auto c = static_cast<std::size_t>(assign[r]);
            if (c < cm.cols.size() && cm.probability[r][c] >= 0.0)
                joint[i].push_back(
                    {cm.rows[r], cm.cols[c], cm.probability[r][c], PairFlag::Joint});
            else
                unmatched[i].push_back(cm.rows[r]);
        }
    });

    AlignmentSet result;
    std::size_t orphan_count = 0;
    auto handle_orphan = [&](const std::string& s) {
        ++orphan_count;
        if (opts.orphan_mode == OrphanMode::Drop) return;
        const Candidate& best = table.top1(s);
        result.set({s, best.target, best.probability, PairFlag::Orphan});
    };
    for (std::size_t i = 0; i < dec.sub_spaces.size(); ++i) {
        for (auto& p : joint[i]) result.set(std::move(p));
        for (const auto& s : unmatched[i]) handle_orphan(s);
    }
    for (const auto& s : dec.orphans) handle_orphan(s);

    if (stats) {
        stats->sub_spaces = dec.sub_spaces.size();
        stats->max_subspace = 0;
        for (const auto& space : dec.sub_spaces)
            stats->max_subspace = std::max(stats->max_subspace, space.side());
        stats->orphans = orphan_count;
        stats->wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return result;
}

// Sidecar next to a joint-solve alignment file.
inline void save_jea_stats(const JeaStats& s, std::ostream& out) {
    auto old_precision = out.precision(17);
    out << "sub_spaces=" << s.sub_spaces << '\n'
        << "max_subspace=" << s.max_subspace << '\n'
        << "orphans=" << s.orphans << '\n'
        << "wall_time_s=" << s.wall_time_s << '\n';
    out.precision(old_precision);
}

}  // namespace kgalign
