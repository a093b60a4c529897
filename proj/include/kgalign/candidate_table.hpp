#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgalign/errors.hpp"
#include "kgalign/tsv.hpp"

namespace kgalign {

struct Candidate {
    std::string target;
    double probability = 0.0;
};

enum class NormalizeMode { Sum, Softmax };

struct NormalizeOptions {
    NormalizeMode mode = NormalizeMode::Sum;
    double softmax_temp = 0.05;  // only used in Softmax mode
};

// Per-source ranked candidate lists. Each list is sorted by probability
// (non-increasing, ties broken by target id) and sums to 1 within 1e-9.
class CandidateTable {
public:
    using Entries = std::map<std::string, std::vector<Candidate>>;

    const Entries& entries() const { return entries_; }
    bool contains(const std::string& source) const { return entries_.count(source) > 0; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    const std::vector<Candidate>& candidates(const std::string& source) const {
        auto it = entries_.find(source);
        if (it == entries_.end())
            throw LookupError("no candidates for source: " + source);
        return it->second;
    }

    // The highest-probability candidate (ties already resolved by sort order).
    const Candidate& top1(const std::string& source) const {
        return candidates(source).front();
    }

    void set(const std::string& source, std::vector<Candidate> list) {
        entries_[source] = std::move(list);
    }

    void erase(const std::string& source) { entries_.erase(source); }

    // Checks the table invariants; throws std::logic_error on violation.
    void validate() const {
        for (const auto& [source, list] : entries_) {
            if (list.empty())
                throw std::logic_error("empty candidate list for " + source);
            double sum = 0.0;
            std::set<std::string> seen;
            for (std::size_t i = 0; i < list.size(); ++i) {
                sum += list[i].probability;
                if (!seen.insert(list[i].target).second)
                    throw std::logic_error("duplicate target " + list[i].target +
                                           " for source " + source);
                if (i > 0) {
                    const auto& prev = list[i - 1];
                    bool ordered = prev.probability > list[i].probability ||
                                   (prev.probability == list[i].probability &&
                                    prev.target < list[i].target);
                    if (!ordered)
                        throw std::logic_error("candidate order violated for " + source);
                }
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw std::logic_error("probabilities sum to " + std::to_string(sum) +
                                       " for source " + source);
        }
    }

private:
    Entries entries_;
};

// Keeps the top-k raw scores then turns them into probabilities.
// Sum mode: scores are shifted by the minimum kept score when any is
// negative, then divided by their sum; an all-zero result falls back to the
// uniform distribution. Softmax mode: exp((s - max)/T) / Z.
inline std::vector<Candidate> normalize_topk(std::vector<std::pair<std::string, double>> raw,
                                             std::size_t k,
                                             const NormalizeOptions& opts = {}) {
    if (raw.empty())
        throw std::invalid_argument("normalize_topk: empty candidate list");
    if (k == 0)
        throw std::invalid_argument("normalize_topk: k must be positive");

    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (raw.size() > k) raw.resize(k);

    std::vector<Candidate> out;
    out.reserve(raw.size());
    if (opts.mode == NormalizeMode::Softmax) {
        double top = raw.front().second;
        double z = 0.0;
        for (const auto& [t, s] : raw) z += std::exp((s - top) / opts.softmax_temp);
        for (const auto& [t, s] : raw)
            out.push_back({t, std::exp((s - top) / opts.softmax_temp) / z});
    } else {
        double lowest = raw.back().second;  // sorted, so min over kept scores
        double shift = lowest < 0.0 ? -lowest : 0.0;
        double sum = 0.0;
        for (const auto& [t, s] : raw) sum += s + shift;
        if (sum <= 0.0) {
            double uniform = 1.0 / static_cast<double>(raw.size());
            for (const auto& [t, s] : raw) out.push_back({t, uniform});
        } else {
            for (const auto& [t, s] : raw) out.push_back({t, (s + shift) / sum});
        }
    }
    // Normalization preserves score order except for ties; re-sort to keep
    // the (probability desc, id asc) invariant exact.
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.probability != b.probability) return a.probability > b.probability;
        return a.target < b.target;
    });
    return out;
}

// Score file: source-id TAB target-id TAB raw-score. Duplicate
// (source,target) rows: last wins, with a warning. Non-finite scores are a
// parse error.
inline CandidateTable load_candidate_table(std::istream& in, std::size_t k,
                                           const NormalizeOptions& opts = {},
                                           std::ostream* warnings = &std::cerr) {
    std::map<std::string, std::vector<std::pair<std::string, double>>> raw;
    tsv::for_each_row(in, [&](std::size_t line_no, const std::vector<std::string>& f) {
        if (f.size() != 3)
            throw ParseError(line_no, "expected 3 tab-separated fields, got " +
                                          std::to_string(f.size()));
        double score = tsv::parse_finite_double(f[2], line_no);
        auto& list = raw[f[0]];
        auto dup = std::find_if(list.begin(), list.end(),
                                [&](const auto& p) { return p.first == f[1]; });
        if (dup != list.end()) {
            if (warnings)
                *warnings << "warning: line " << line_no << ": duplicate pair (" << f[0]
                          << ", " << f[1] << "), keeping last score\n";
            dup->second = score;
        } else {
            list.emplace_back(f[1], score);
        }
    });

    CandidateTable table;
    for (auto& [source, list] : raw)
        table.set(source, normalize_topk(std::move(list), k, opts));
    table.validate();
    return table;
}

// Raw (pre-normalization) rows grouped by source, as loaded from a score
// file. Used where candidate lists must be re-normalized later.
inline std::map<std::string, std::vector<std::pair<std::string, double>>>
load_raw_scores(std::istream& in, std::ostream* warnings = &std::cerr) {
    std::map<std::string, std::vector<std::pair<std::string, double>>> raw;
    tsv::for_each_row(in, [&](std::size_t line_no, const std::vector<std::string>& f) {
        if (f.size() != 3)
            throw ParseError(line_no, "expected 3 tab-separated fields, got " +
                                          std::to_string(f.size()));
        double score = tsv::parse_finite_double(f[2], line_no);
        auto& list = raw[f[0]];
        auto dup = std::find_if(list.begin(), list.end(),
                                [&](const auto& p) { return p.first == f[1]; });
        if (dup != list.end()) {
            if (warnings)
                *warnings << "warning: line " << line_no << ": duplicate pair (" << f[0]
                          << ", " << f[1] << "), keeping last score\n";
            dup->second = score;
        } else {
            list.emplace_back(f[1], score);
        }
    });
    return raw;
}

inline void save_candidate_table(const CandidateTable& table, std::ostream& out) {
    auto old = out.precision(17);
    for (const auto& [source, list] : table.entries())
        for (const auto& c : list)
            out << source << '\t' << c.target << '\t' << c.probability << '\n';
    out.precision(old);
}

}  // namespace kgalign
