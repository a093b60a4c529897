#pragma once

#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kgalign/candidate_table.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/parallel.hpp"
#include "kgalign/similarity.hpp"

namespace kgalign {

// Alignments promoted to established knowledge. Strictly one-to-one: feeding
// a many-to-one pair back into scoring would poison every later round.
class ForcedMatches {
public:
    void add(const std::string& source, const std::string& target) {
        auto s_it = s2t_.find(source);
        if (s_it != s2t_.end()) {
            if (s_it->second == target) return;
            throw std::logic_error("forced match conflict: source " + source +
                                   " already bound to " + s_it->second);
        }
        auto t_it = t2s_.find(target);
        if (t_it != t2s_.end())
            throw std::logic_error("forced match conflict: target " + target +
                                   " already bound to " + t_it->second);
        s2t_.emplace(source, target);
        t2s_.emplace(target, source);
    }

    bool has_source(const std::string& s) const { return s2t_.count(s) > 0; }
    bool has_target(const std::string& t) const { return t2s_.count(t) > 0; }

    const std::string* target_of(const std::string& s) const {
        auto it = s2t_.find(s);
        return it == s2t_.end() ? nullptr : &it->second;
    }

    bool pair_forced(const std::string& s, const std::string& t) const {
        auto it = s2t_.find(s);
        return it != s2t_.end() && it->second == t;
    }

    std::size_t size() const { return s2t_.size(); }
    bool empty() const { return s2t_.empty(); }
    auto begin() const { return s2t_.begin(); }
    auto end() const { return s2t_.end(); }

private:
    std::map<std::string, std::string> s2t_;
    std::map<std::string, std::string> t2s_;
};

struct ScoreOptions {
    double lambda = 0.5;  // blend: topic-name similarity vs neighborhood match
    int radius = 1;       // topic graph hop count
};

// Similarity between two topic graphs: lambda * sim(topic names) +
// (1-lambda) * mean over source neighbors u of max over target nodes v of
// sim(u, v). A forced (u, v) pair counts as similarity exactly 1.0 no matter
// what the names say. Directional by design: max-pooling runs source to
// target only. kg_s/kg_t supply surfaces (pass the substituted source copy
// to get substitution semantics).
template <typename Sim>
double score_pair(const TopicGraph& tg_s, const KnowledgeGraph& kg_s,
                  const TopicGraph& tg_t, const KnowledgeGraph& kg_t,
                  const ForcedMatches& forced, double lambda, Sim&& sim) {
    auto sim_ids = [&](const std::string& u, const std::string& v) {
        if (forced.pair_forced(u, v)) return 1.0;
        return sim(kg_s.surface(u), kg_t.surface(v));
    };

    double topic_term = sim_ids(tg_s.topic_entity, tg_t.topic_entity);

    double total = 0.0;
    std::size_t neighbors = 0;
    for (const auto& u : tg_s.nodes) {
        if (u == tg_s.topic_entity) continue;
        double best = 0.0;
        for (const auto& v : tg_t.nodes) best = std::max(best, sim_ids(u, v));
        total += best;
        ++neighbors;
    }
    double neighbor_term = neighbors == 0 ? 0.0 : total / static_cast<double>(neighbors);

    return lambda * topic_term + (1.0 - lambda) * neighbor_term;
}

inline double score_pair(const TopicGraph& tg_s, const KnowledgeGraph& kg_s,
                         const TopicGraph& tg_t, const KnowledgeGraph& kg_t,
                         const ForcedMatches& forced, double lambda = 0.5) {
    return score_pair(tg_s, kg_s, tg_t, kg_t, forced, lambda,
                      [](const std::string& a, const std::string& b) {
                          return name_similarity(a, b);
                      });
}

// Copy of kg_s where every forced source entity takes its forced target's
// surface name. Ids and triples are untouched; only |forced| names change.
inline KnowledgeGraph apply_surface_substitution(const KnowledgeGraph& kg_s,
                                                 const ForcedMatches& forced,
                                                 const KnowledgeGraph& kg_t) {
    KnowledgeGraph out = kg_s;
    for (const auto& [s, t] : forced) out.set_surface(s, kg_t.surface(t));
    return out;
}

// Scores each source against its pooled targets and normalizes the top-k
// into a probability row. Substitution is applied once up front. Optional
// caches let repeated calls (decoding rounds) skip rebuilding topic graphs.
inline CandidateTable build_candidate_table(
    const KnowledgeGraph& kg_s, const KnowledgeGraph& kg_t,
    const std::vector<std::string>& sources,
    const std::map<std::string, std::vector<std::string>>& candidate_pool,
    const ForcedMatches& forced, std::size_t k,
    const ScoreOptions& score_opts = {}, const NormalizeOptions& norm_opts = {},
    std::size_t workers = 1, SimilarityCache* sim_cache = nullptr,
    std::map<std::string, TopicGraph>* source_tg_cache = nullptr,
    std::map<std::string, TopicGraph>* target_tg_cache = nullptr,
    std::ostream* warnings = &std::cerr) {
    KnowledgeGraph kg_sub = apply_surface_substitution(kg_s, forced, kg_t);

    std::map<std::string, TopicGraph> local_src_tgs, local_tgt_tgs;
    auto& src_tgs = source_tg_cache ? *source_tg_cache : local_src_tgs;
    auto& tgt_tgs = target_tg_cache ? *target_tg_cache : local_tgt_tgs;

    // Prefill topic graphs serially; the parallel phase below only reads.
    std::vector<const std::string*> scored;
    for (const auto& s : sources) {
        auto pool_it = candidate_pool.find(s);
        if (pool_it == candidate_pool.end() || pool_it->second.empty()) {
            if (warnings) *warnings << "scorer: no candidates for source " << s << ", skipped\n";
            continue;
        }
        if (!src_tgs.count(s)) src_tgs.emplace(s, build_topic_graph(kg_s, s, score_opts.radius));
        for (const auto& t : pool_it->second)
            if (!tgt_tgs.count(t)) tgt_tgs.emplace(t, build_topic_graph(kg_t, t, score_opts.radius));
        scored.push_back(&s);
    }

    auto sim = [&](const std::string& a, const std::string& b) {
        return sim_cache ? (*sim_cache)(a, b) : name_similarity(a, b);
    };

    std::vector<std::vector<Candidate>> rows(scored.size());
    parallel_for(scored.size(), workers, [&](std::size_t i) {
        const std::string& s = *scored[i];
        const TopicGraph& tg_s = src_tgs.at(s);
        const auto& pool = candidate_pool.at(s);
        std::vector<std::pair<std::string, double>> raw;
        raw.reserve(pool.size());
        for (const auto& t : pool)
            raw.emplace_back(t, score_pair(tg_s, kg_sub, tgt_tgs.at(t), kg_t, forced,
                                           score_opts.lambda, sim));
        rows[i] = normalize_topk(std::move(raw), k, norm_opts);
    });

    CandidateTable table;
    for (std::size_t i = 0; i < scored.size(); ++i) table.set(*scored[i], std::move(rows[i]));
    return table;
}

// Round-aware scoring interface for the decoding loop. Implementations must
// be deterministic for fixed inputs and must exclude targets already claimed
// by `forced` unless a source would otherwise be left without candidates.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual CandidateTable score(const std::vector<std::string>& sources,
                                 const ForcedMatches& forced) = 0;
};

struct DeskScorerConfig {
    ScoreOptions score{};
    std::size_t top_k = 10;
    NormalizeOptions normalize{};
    std::size_t workers = 1;
    bool restrict_claimed = true;  // drop targets already forced elsewhere
    std::ostream* warnings = &std::cerr;
};

// Built-in lexical + structural matcher over two loaded KGs. No training:
// name edit distance plus one-hop neighborhood agreement, with forced pairs
// injected as perfect matches and surface substitution applied per round.
class DeskScorer : public Scorer {
public:
    using Config = DeskScorerConfig;

    DeskScorer(const KnowledgeGraph& kg_s, const KnowledgeGraph& kg_t, Config cfg = {})
        : kg_s_(kg_s), kg_t_(kg_t), cfg_(cfg) {
        all_targets_ = kg_t_.entity_ids();
        std::sort(all_targets_.begin(), all_targets_.end());
    }

    // Restricts candidate targets per source; default is every target entity.
    void set_candidate_pool(std::map<std::string, std::vector<std::string>> pool) {
        explicit_pool_ = std::move(pool);
    }

    CandidateTable score(const std::vector<std::string>& sources,
                         const ForcedMatches& forced) override {
        std::map<std::string, std::vector<std::string>> pool;
        for (const auto& s : sources) {
            const std::vector<std::string>* base = &all_targets_;
            if (!explicit_pool_.empty()) {
                auto it = explicit_pool_.find(s);
                if (it == explicit_pool_.end()) continue;  // reported downstream
                base = &it->second;
            }
            std::vector<std::string> kept;
            if (cfg_.restrict_claimed && !forced.empty()) {
                for (const auto& t : *base)
                    if (!forced.has_target(t)) kept.push_back(t);
            }
            pool.emplace(s, kept.empty() ? *base : std::move(kept));
        }
        return build_candidate_table(kg_s_, kg_t_, sources, pool, forced, cfg_.top_k,
                                     cfg_.score, cfg_.normalize, cfg_.workers, &sim_cache_,
                                     &source_tgs_, &target_tgs_, cfg_.warnings);
    }

private:
    const KnowledgeGraph& kg_s_;
    const KnowledgeGraph& kg_t_;
    Config cfg_;
    std::vector<std::string> all_targets_;
    std::map<std::string, std::vector<std::string>> explicit_pool_;
    SimilarityCache sim_cache_;
    // Topic graphs hold ids only, so they survive surface substitution and
    // are reused across rounds.
    std::map<std::string, TopicGraph> source_tgs_;
    std::map<std::string, TopicGraph> target_tgs_;
};

struct TableScorerConfig {
    std::size_t top_k = 10;
    NormalizeOptions normalize{};
    bool restrict_claimed = true;
    std::ostream* warnings = &std::cerr;
};

// Serves externally computed raw scores (e.g. a neural model's output).
// Later rounds renormalize over the candidates that are still unclaimed; if
// every candidate of a source is claimed, the full list is used unchanged so
// the source still gets a prediction.
class TableScorer : public Scorer {
public:
    using Config = TableScorerConfig;
    using RawScores = std::map<std::string, std::vector<std::pair<std::string, double>>>;

    explicit TableScorer(RawScores raw, Config cfg = {}) : raw_(std::move(raw)), cfg_(cfg) {}

    static TableScorer from_stream(std::istream& in, Config cfg = {}) {
        return TableScorer(load_raw_scores(in, cfg.warnings), cfg);
    }

    CandidateTable score(const std::vector<std::string>& sources,
                         const ForcedMatches& forced) override {
        CandidateTable table;
        for (const auto& s : sources) {
            auto it = raw_.find(s);
            if (it == raw_.end()) {
                if (cfg_.warnings && warned_.insert(s).second)
                    *cfg_.warnings << "scorer: no scores for source " << s << ", skipped\n";
                continue;
            }
            std::vector<std::pair<std::string, double>> list;
            if (cfg_.restrict_claimed && !forced.empty()) {
                for (const auto& cand : it->second)
                    if (!forced.has_target(cand.first)) list.push_back(cand);
            }
            if (list.empty()) list = it->second;
            table.set(s, normalize_topk(std::move(list), cfg_.top_k, cfg_.normalize));
        }
        return table;
    }

private:
    RawScores raw_;
    Config cfg_;
    std::set<std::string> warned_;
};

}  // namespace kgalign
