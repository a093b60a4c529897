#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgalign/alignment.hpp"
#include "kgalign/errors.hpp"
#include "kgalign/tsv.hpp"

namespace kgalign {

struct GoldPair {
    std::string source;
    std::string target;
};

// Reference alignment with an optional train/test split. Freshly loaded
// gold treats every pair as test until split() is called.
class GoldAlignments {
public:
    void add(const std::string& source, const std::string& target, std::size_t line_no = 0) {
        if (s2t_.count(source))
            throw ParseError(line_no, "duplicate gold source: " + source);
        if (t2s_.count(target))
            throw ParseError(line_no, "duplicate gold target: " + target);
        s2t_.emplace(source, target);
        t2s_.emplace(target, source);
    }

    // Rows: source-id TAB target-id.
    static GoldAlignments load(std::istream& in) {
        GoldAlignments gold;
        tsv::for_each_row(in, [&](std::size_t line_no, const std::vector<std::string>& f) {
            if (f.size() != 2)
                throw ParseError(line_no, "expected 2 tab-separated fields, got " +
                                              std::to_string(f.size()));
            gold.add(f[0], f[1], line_no);
        });
        return gold;
    }

    std::size_t size() const { return s2t_.size(); }
    bool empty() const { return s2t_.empty(); }

    const std::string* target_of(const std::string& source) const {
        auto it = s2t_.find(source);
        return it == s2t_.end() ? nullptr : &it->second;
    }

    // Deterministic split: pairs ordered by source id, Fisher-Yates shuffled
    // with the seed, first round(train_frac * n) become train. Hand-rolled
    // swaps (not std::shuffle) so the outcome is identical on every
    // standard library.
    void split(double train_frac, std::uint64_t seed) {
        if (!(train_frac >= 0.0 && train_frac <= 1.0))
            throw std::invalid_argument("split: train_frac out of [0,1]");
        std::vector<std::size_t> order(s2t_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 rng(seed);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng() % i]);
        auto n_train = static_cast<std::size_t>(
            static_cast<double>(order.size()) * train_frac + 0.5);
        train_.assign(s2t_.size(), false);
        for (std::size_t k = 0; k < n_train; ++k) train_[order[k]] = true;
    }

    std::vector<GoldPair> test_pairs() const { return select(false); }
    std::vector<GoldPair> train_pairs() const { return select(true); }

    void save(std::ostream& out) const {
        for (const auto& [s, t] : s2t_) out << s << '\t' << t << '\n';
    }

    std::vector<std::string> test_sources() const {
        std::vector<std::string> out;
        for (const auto& p : test_pairs()) out.push_back(p.source);
        return out;
    }

private:
    std::vector<GoldPair> select(bool want_train) const {
        std::vector<GoldPair> out;
        std::size_t i = 0;
        for (const auto& [s, t] : s2t_) {
            bool is_train = i < train_.size() && train_[i];
            if (is_train == want_train) out.push_back({s, t});
            ++i;
        }
        return out;
    }

    std::map<std::string, std::string> s2t_;
    std::map<std::string, std::string> t2s_;
    std::vector<bool> train_;  // indexed in s2t_ iteration order; empty = all test
};

// Fraction of gold test pairs predicted exactly. Missing or orphaned
// sources count as wrong: the denominator is the full test set.
inline double hits_at_1(const AlignmentSet& pred, const GoldAlignments& gold) {
    std::vector<GoldPair> test = gold.test_pairs();
    if (test.empty()) throw std::invalid_argument("hits_at_1: empty gold test set");
    std::size_t hit = 0;
    for (const auto& g : test)
        if (pred.contains(g.source) && pred.at(g.source).target == g.target) ++hit;
    return static_cast<double>(hit) / static_cast<double>(test.size());
}

// Fraction of predicted pairs whose target is claimed by two or more
// sources.
inline double many_to_one_rate(const AlignmentSet& pred) {
    if (pred.empty()) throw std::invalid_argument("many_to_one_rate: empty prediction");
    std::map<std::string, std::size_t> claims;
    for (const auto& [s, p] : pred) ++claims[p.target];
    std::size_t contested = 0;
    for (const auto& [s, p] : pred)
        if (claims[p.target] >= 2) ++contested;
    return static_cast<double>(contested) / static_cast<double>(pred.size());
}

struct MetricsReport {
    double hits_at_1 = 0.0;
    double many_to_one_rate = 0.0;
    std::size_t rounds = 0;
    std::size_t max_subspace = 0;
    double wall_time_s = 0.0;
};

inline void save_metrics_kv(const MetricsReport& r, std::ostream& out) {
    auto old_precision = out.precision(17);
    out << "hits_at_1=" << r.hits_at_1 << '\n'
        << "many_to_one_rate=" << r.many_to_one_rate << '\n'
        << "rounds=" << r.rounds << '\n'
        << "max_subspace=" << r.max_subspace << '\n'
        << "wall_time_s=" << r.wall_time_s << '\n';
    out.precision(old_precision);
}

inline void save_metrics_json(const MetricsReport& r, std::ostream& out) {
    nlohmann::json j;
    j["hits_at_1"] = r.hits_at_1;
    j["many_to_one_rate"] = r.many_to_one_rate;
    j["rounds"] = r.rounds;
    j["max_subspace"] = r.max_subspace;
    j["wall_time_s"] = r.wall_time_s;
    out << j.dump(2) << '\n';
}

}  // namespace kgalign
