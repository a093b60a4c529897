#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kgalign/alignment.hpp"
#include "kgalign/assignment.hpp"
#include "kgalign/candidate_table.hpp"
#include "kgalign/scorer.hpp"

namespace kgalign {

struct DecodeConfig {
    double alpha = 0.75;        // confidence bar for an easy alignment (strict >)
    std::size_t k_min = 20;     // continue only when more than this many new easy
    double tau = 0.10;          // drop threshold for the final joint solve
    std::size_t top_k = 10;     // candidate list length per source
    std::size_t max_rounds = 50;  // safety cap; not part of the method itself
    bool use_jea_final = false;   // solve leftover hard sources jointly
};

struct RoundTrace {
    std::size_t round = 0;
    std::size_t new_easy = 0;
    std::size_t cumulative_easy = 0;
    std::size_t hard_remaining = 0;
};

// Emitted as: round TAB new_easy TAB cumulative_easy TAB hard_remaining.
inline void save_trace(const std::vector<RoundTrace>& trace, std::ostream& out) {
    for (const auto& r : trace)
        out << r.round << '\t' << r.new_easy << '\t' << r.cumulative_easy << '\t'
            << r.hard_remaining << '\n';
}

// Scorer threw mid-decode; carries the rounds completed up to that point.
class DecodeError : public std::runtime_error {
public:
    DecodeError(const std::string& msg, std::vector<RoundTrace> trace)
        : std::runtime_error(msg), trace_(std::move(trace)) {}
    const std::vector<RoundTrace>& trace() const { return trace_; }

private:
    std::vector<RoundTrace> trace_;
};

// Splits a table at confidence alpha: sources whose top candidate exceeds
// alpha become easy pairs, everyone else stays hard. When several easy
// sources claim one target, the highest-probability source keeps it (ties:
// lexicographically smaller source id) and the rest are demoted to hard.
inline std::pair<AlignmentSet, std::vector<std::string>> partition_easy_hard(
    const CandidateTable& table, double alpha) {
    std::map<std::string, const std::string*> winner_by_target;  // target -> source
    for (const auto& [s, cands] : table.entries()) {
        const Candidate& top = cands.front();
        if (!(top.probability > alpha)) continue;
        auto [it, fresh] = winner_by_target.emplace(top.target, &s);
        if (fresh) continue;
        double incumbent = table.top1(*it->second).probability;
        if (top.probability > incumbent ||
            (top.probability == incumbent && s < *it->second))
            it->second = &s;
    }

    std::set<std::string> easy_sources;
    for (const auto& [t, s] : winner_by_target) easy_sources.insert(*s);

    AlignmentSet easy;
    std::vector<std::string> hard;
    for (const auto& [s, cands] : table.entries()) {
        if (easy_sources.count(s)) {
            const Candidate& top = cands.front();
            easy.set({s, top.target, top.probability, PairFlag::Easy});
        } else {
            hard.push_back(s);
        }
    }
    return {std::move(easy), std::move(hard)};
}

// `all` minus the sources already aligned in `easy`, original order kept.
inline std::vector<std::string> remaining_sources(const std::vector<std::string>& all,
                                                  const AlignmentSet& easy) {
    std::vector<std::string> out;
    out.reserve(all.size());
    for (const auto& s : all)
        if (!easy.contains(s)) out.push_back(s);
    return out;
}

struct DecodeResult {
    AlignmentSet alignments;
    std::vector<RoundTrace> trace;
    JeaStats jea_stats;  // zeros unless use_jea_final ran a joint solve
};

// Easy-to-hard decoding. Each round scores the still-hard sources under the
// forced pairs accumulated so far; confident predictions are promoted and
// the loop continues while more than k_min of them appear. Promotions are
// irrevocable. The final round's table supplies predictions for whatever
// stayed hard: jointly (jea_solve) or per-source top-1.
inline DecodeResult ehd_decode(Scorer& scorer, const std::vector<std::string>& sources,
                               const DecodeConfig& cfg, const JeaOptions& jea_opts = {}) {
    if (sources.empty()) throw std::invalid_argument("ehd_decode: no sources");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw std::invalid_argument("ehd_decode: alpha out of (0,1]");
    if (cfg.k_min == 0) throw std::invalid_argument("ehd_decode: k_min must be >= 1");

    DecodeResult res;
    ForcedMatches forced;
    std::vector<std::string> hard = sources;
    CandidateTable last_table;
    std::size_t cumulative = 0;

    for (std::size_t round = 1;; ++round) {
        CandidateTable table;
        try {
            table = scorer.score(hard, forced);
        } catch (const std::exception& e) {
            throw DecodeError("scorer failed in round " + std::to_string(round) + ": " +
                                  e.what(),
                              std::move(res.trace));
        }

        auto [easy, hard_in_table] = partition_easy_hard(table, cfg.alpha);
        (void)hard_in_table;  // hard list tracked below; includes unscored sources

        // A custom scorer might still emit a target that is already forced;
        // never let it displace established knowledge.
        std::vector<std::string> demoted;
        for (const auto& [s, p] : easy)
            if (forced.has_target(p.target)) demoted.push_back(s);
        // Pairs found this round, whether or not the loop continues.
        std::size_t new_easy = easy.size() - demoted.size();
        cumulative += new_easy;
        res.trace.push_back({round, new_easy, cumulative, hard.size() - new_easy});

        bool proceed = new_easy > cfg.k_min && round < cfg.max_rounds;
        if (!proceed) {
            last_table = std::move(table);
            break;
        }
        for (const auto& [s, p] : easy) {
            if (std::find(demoted.begin(), demoted.end(), s) != demoted.end()) continue;
            forced.add(s, p.target);
            res.alignments.set(p);
        }
        hard = remaining_sources(hard, res.alignments);
    }

    // Predictions for sources never promoted, out of the final-round table.
    if (cfg.use_jea_final) {
        if (!last_table.empty()) {
            JeaOptions jo = jea_opts;
            jo.tau = cfg.tau;
            AlignmentSet joint = jea_solve(last_table, jo, &res.jea_stats);
            for (const auto& [s, p] : joint) res.alignments.set(p);
        }
    } else {
        for (const auto& [s, cands] : last_table.entries()) {
            const Candidate& top = cands.front();
            res.alignments.set({s, top.target, top.probability, PairFlag::Top1});
        }
    }
    return res;
}

}  // namespace kgalign
