#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgalign/assignment.hpp"
#include "kgalign/ehd.hpp"
#include "kgalign/metrics.hpp"
#include "kgalign/scorer.hpp"

namespace kgalign {

enum class DecodeMode { Baseline, Ehd, Jea, EhdJea };

inline const char* to_string(DecodeMode m) {
    switch (m) {
        case DecodeMode::Baseline: return "baseline";
        case DecodeMode::Ehd: return "ehd";
        case DecodeMode::Jea: return "jea";
        case DecodeMode::EhdJea: return "ehd_jea";
    }
    return "baseline";
}

struct ExperimentConfig {
    DecodeMode mode = DecodeMode::EhdJea;
    DecodeConfig decode{};
    OrphanMode orphan_mode = OrphanMode::Top1;
    AssignmentSolver solver = AssignmentSolver::FourStep;
    std::size_t workers = 1;
    double train_frac = 0.30;
    std::uint64_t seed = 0;
};

struct ExperimentResult {
    AlignmentSet alignments;
    std::vector<RoundTrace> trace;
    JeaStats jea_stats;
    MetricsReport report;
};

// One end-to-end run: split gold, decode the test sources in the requested
// mode, and measure. The scorer is shared infrastructure (its caches do not
// change results), so callers may reuse one across runs.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, Scorer& scorer,
                                       const GoldAlignments& gold) {
    GoldAlignments split_gold = gold;
    split_gold.split(cfg.train_frac, cfg.seed);
    std::vector<std::string> sources = split_gold.test_sources();
    if (sources.empty())
        throw std::invalid_argument("run_experiment: gold test split is empty");

    JeaOptions jea_opts{cfg.decode.tau, cfg.orphan_mode, cfg.solver, cfg.workers};

    ExperimentResult res;
    switch (cfg.mode) {
        case DecodeMode::Baseline: {
            CandidateTable table = scorer.score(sources, ForcedMatches{});
            for (const auto& [s, cands] : table.entries())
                res.alignments.set(
                    {s, cands.front().target, cands.front().probability, PairFlag::Top1});
            break;
        }
        case DecodeMode::Jea: {
            CandidateTable table = scorer.score(sources, ForcedMatches{});
            res.alignments = jea_solve(table, jea_opts, &res.jea_stats);
            break;
        }
        case DecodeMode::Ehd:
        case DecodeMode::EhdJea: {
            DecodeConfig dc = cfg.decode;
            dc.use_jea_final = cfg.mode == DecodeMode::EhdJea;
            DecodeResult dr = ehd_decode(scorer, sources, dc, jea_opts);
            res.alignments = std::move(dr.alignments);
            res.trace = std::move(dr.trace);
            res.jea_stats = dr.jea_stats;
            break;
        }
    }

    res.report.hits_at_1 = hits_at_1(res.alignments, split_gold);
    res.report.many_to_one_rate =
        res.alignments.empty() ? 0.0 : many_to_one_rate(res.alignments);
    res.report.rounds = res.trace.empty() ? 1 : res.trace.size();
    res.report.max_subspace = res.jea_stats.max_subspace;
    res.report.wall_time_s = res.jea_stats.wall_time_s;
    return res;
}

struct ComparisonRow {
    DecodeMode mode = DecodeMode::Baseline;
    MetricsReport report;
};

// Same inputs decoded four ways, for side-by-side method comparison.
inline std::vector<ComparisonRow> run_comparison(const ExperimentConfig& base, Scorer& scorer,
                                                 const GoldAlignments& gold) {
    std::vector<ComparisonRow> rows;
    for (DecodeMode mode : {DecodeMode::Baseline, DecodeMode::Ehd, DecodeMode::Jea,
                            DecodeMode::EhdJea}) {
        ExperimentConfig cfg = base;
        cfg.mode = mode;
        rows.push_back({mode, run_experiment(cfg, scorer, gold).report});
    }
    return rows;
}

inline void save_comparison(const std::vector<ComparisonRow>& rows, std::ostream& out) {
    auto old_precision = out.precision(17);
    out << "mode\thits_at_1\tmany_to_one_rate\trounds\tmax_subspace\twall_time_s\n";
    for (const auto& r : rows)
        out << to_string(r.mode) << '\t' << r.report.hits_at_1 << '\t'
            << r.report.many_to_one_rate << '\t' << r.report.rounds << '\t'
            << r.report.max_subspace << '\t' << r.report.wall_time_s << '\n';
    out.precision(old_precision);
}

}  // namespace kgalign
