#pragma once

#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

#include "kgalign/errors.hpp"
#include "kgalign/tsv.hpp"

namespace kgalign {

// How a pair was decided: by a sub-space assignment solve (joint), as a
// below-threshold fallback to the best candidate (orphan), by plain highest
// probability (top1), or by confidence promotion during iterative decoding
// (easy).
enum class PairFlag { Joint, Orphan, Top1, Easy };

inline const char* to_string(PairFlag f) {
    switch (f) {
        case PairFlag::Joint: return "joint";
        case PairFlag::Orphan: return "orphan";
        case PairFlag::Top1: return "top1";
        case PairFlag::Easy: return "easy";
    }
    return "top1";
}

inline PairFlag pair_flag_from_string(std::string_view s, std::size_t line_no = 0) {
    if (s == "joint") return PairFlag::Joint;
    if (s == "orphan") return PairFlag::Orphan;
    if (s == "top1") return PairFlag::Top1;
    if (s == "easy") return PairFlag::Easy;
    throw ParseError(line_no, "unknown pair flag: " + std::string(s));
}

struct AlignedPair {
    std::string source;
    std::string target;
    double probability = 0.0;
    PairFlag flag = PairFlag::Top1;
};

// Predicted alignment, at most one pair per source. Iteration order is
// lexicographic by source id, which keeps every serialization deterministic.
class AlignmentSet {
public:
    using Map = std::map<std::string, AlignedPair>;

    void set(AlignedPair p) {
        std::string key = p.source;
        pairs_[std::move(key)] = std::move(p);
    }

    bool contains(const std::string& source) const { return pairs_.count(source) > 0; }

    const AlignedPair& at(const std::string& source) const {
        auto it = pairs_.find(source);
        if (it == pairs_.end()) throw LookupError("no alignment for source: " + source);
        return it->second;
    }

    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    Map::const_iterator begin() const { return pairs_.begin(); }
    Map::const_iterator end() const { return pairs_.end(); }

    // True when no target is claimed twice among non-orphan pairs. Orphan
    // fallbacks are exempt: they deliberately bypass the one-to-one solve.
    bool one_to_one() const {
        std::set<std::string> targets;
        for (const auto& [s, p] : pairs_) {
            if (p.flag == PairFlag::Orphan) continue;
            if (!targets.insert(p.target).second) return false;
        }
        return true;
    }

    // Rows: source TAB target TAB probability TAB flag.
    void save(std::ostream& out) const {
        auto old_precision = out.precision(17);
        for (const auto& [s, p] : pairs_)
            out << p.source << '\t' << p.target << '\t' << p.probability << '\t'
                << to_string(p.flag) << '\n';
        out.precision(old_precision);
    }

    static AlignmentSet load(std::istream& in) {
        AlignmentSet set;
        tsv::for_each_row(in, [&](std::size_t line_no, const std::vector<std::string>& f) {
            if (f.size() != 4)
                throw ParseError(line_no, "expected 4 tab-separated fields, got " +
                                              std::to_string(f.size()));
            AlignedPair p;
            p.source = f[0];
            p.target = f[1];
            p.probability = tsv::parse_finite_double(f[2], line_no);
            p.flag = pair_flag_from_string(f[3], line_no);
            set.set(std::move(p));
        });
        return set;
    }

private:
    Map pairs_;
};

}  // namespace kgalign
