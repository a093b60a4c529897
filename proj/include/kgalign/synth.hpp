#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgalign/kg.hpp"
#include "kgalign/metrics.hpp"
#include "kgalign/similarity.hpp"

namespace kgalign {

// Deterministic entity-id scheme of the synthetic corpus, exposed so tests
// can address specific entities (e.g. "was twin pair 7 resolved?").
namespace twin_ids {
inline std::string twin_a(std::size_t i) { return "twinA_" + std::to_string(i); }
inline std::string twin_b(std::size_t i) { return "twinB_" + std::to_string(i); }
inline std::string shared(std::size_t i, std::size_t j) {
    return "sn_" + std::to_string(i) + "_" + std::to_string(j);
}
inline std::string disc_a(std::size_t i) { return "da_" + std::to_string(i); }
inline std::string disc_b(std::size_t i) { return "db_" + std::to_string(i); }
inline std::string anchor_a(std::size_t i, std::size_t j) {
    return "aa_" + std::to_string(i) + "_" + std::to_string(j);
}
inline std::string anchor_b(std::size_t i, std::size_t j) {
    return "ab_" + std::to_string(i) + "_" + std::to_string(j);
}
inline std::string src(const std::string& key) { return "s:" + key; }
inline std::string tgt(const std::string& key) { return "t:" + key; }
}  // namespace twin_ids

struct SynthCorpus {
    KnowledgeGraph kg_s;
    KnowledgeGraph kg_t;
    GoldAlignments gold;
};

namespace detail {

// One UTF-8 string in, one entry per letter out, so alphabets below can be
// written as plain literals.
inline std::vector<std::string> split_letters(const std::string& s) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.size();) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t n = (c & 0xF8) == 0xF0 ? 4 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xE0) == 0xC0 ? 2 : 1;
        out.push_back(s.substr(i, n));
        i += n;
    }
    return out;
}

// Random names come from per-class scripts so cross-language similarity is
// exactly zero where the construction needs it, and from rejection sampling
// with a minimum edit distance so unrelated names are never accidental
// near-duplicates. Wide scripts keep rival names dissimilar even with
// hundreds of pairs in play; both properties together make the twin scores
// tie exactly before forcing and separate decisively after.
class NamePool {
public:
    explicit NamePool(std::uint64_t seed) : rng_(seed) {}

    std::string draw(const std::vector<std::string>& alphabet, std::size_t len,
                     std::vector<std::string>* pool, std::size_t min_dist) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            std::string name;
            for (std::size_t i = 0; i < len; ++i) name += alphabet[rng_() % alphabet.size()];
            if (!pool) return name;
            bool ok = true;
            for (const auto& other : *pool)
                if (distance(name, other) < min_dist) {
                    ok = false;
                    break;
                }
            if (ok) {
                pool->push_back(name);
                return name;
            }
        }
        throw std::logic_error("synth: name space exhausted");
    }

    static std::size_t distance(const std::string& a, const std::string& b) {
        return levenshtein(decode_folded(a), decode_folded(b));
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace detail

// Builds two mirrored KGs full of adversarial twin pairs. Each pair has two
// target entities with near-identical names (common prefix, 2-character
// suffix difference) sharing n_shared neighbors; each twin additionally has
// one discriminative neighbor, which in turn has two anchor neighbors with
// names identical across both graphs. Twin and discriminative-neighbor names
// on the source side are "untransliterated" (drawn from a disjoint alphabet),
// so nothing lexical separates the twins until the discriminative neighbor
// has been aligned and fed back as knowledge. Gold maps every source to its
// mirror. Deterministic under seed.
inline SynthCorpus generate_adversarial_twins(std::size_t n_pairs, std::size_t n_shared,
                                              std::uint64_t seed) {
    if (n_pairs < 1) throw std::invalid_argument("generate_adversarial_twins: n_pairs >= 1");
    if (n_shared < 1)
        throw std::invalid_argument("generate_adversarial_twins: n_shared >= 1");

    // Source-only names; zero similarity against every target-side name.
    const auto kScriptA = detail::split_letters("abcdefghijklm");
    // Target-side names (twin stems, shared neighbors).
    const auto kGeneral = detail::split_letters("абвгдежзийклмнопрстуфхцчшщъыьэюя");
    // Per-discriminative anchors take one script each, so the two anchors of
    // one neighbor can never resemble one another.
    const auto kAnchorLow = detail::split_letters("αβγδεζηθικλμνξοπρστυφχψω");
    const auto kAnchorHigh = detail::split_letters("աբգդեզէըթժիլխծկհձղճմյնշո");
    // Discriminative-neighbor target names; disjoint from everything else
    // and from each other across the A/B sides.
    const auto kDiscA = detail::split_letters("tuv");
    const auto kDiscB = detail::split_letters("wxyz");

    detail::NamePool names(seed);
    std::vector<std::string> script_a_pool, targetish_pool, disc_a_pool, disc_b_pool;

    SynthCorpus c;
    using namespace twin_ids;
    auto add_both = [&](const std::string& key, const std::string& src_name,
                        const std::string& tgt_name) {
        c.kg_s.add_entity(src(key), src_name);
        c.kg_t.add_entity(tgt(key), tgt_name);
        c.gold.add(src(key), tgt(key));
    };
    auto link_both = [&](const std::string& a, const std::string& b) {
        c.kg_s.add_triple(src(a), "rel", src(b));
        c.kg_t.add_triple(tgt(a), "rel", tgt(b));
    };

    for (std::size_t i = 0; i < n_pairs; ++i) {
        // Twin stem: retry until both suffixed twin names keep their
        // distance from every existing target-side name.
        std::string stem;
        for (int attempt = 0;; ++attempt) {
            stem = names.draw(kGeneral, 10, nullptr, 0);
            bool ok = true;
            for (const auto& other : targetish_pool)
                if (detail::NamePool::distance(stem + "qq", other) < 6 ||
                    detail::NamePool::distance(stem + "rr", other) < 6) {
                    ok = false;
                    break;
                }
            if (ok) break;
            if (attempt >= 1000) throw std::logic_error("synth: name space exhausted");
        }
        targetish_pool.push_back(stem + "qq");
        targetish_pool.push_back(stem + "rr");

        add_both(twin_a(i), names.draw(kScriptA, 10, &script_a_pool, 3), stem + "qq");
        add_both(twin_b(i), names.draw(kScriptA, 10, &script_a_pool, 3), stem + "rr");

        for (std::size_t j = 0; j < n_shared; ++j) {
            std::string sn = names.draw(kGeneral, 14, &targetish_pool, 6);
            add_both(shared(i, j), sn, sn);
            link_both(twin_a(i), shared(i, j));
            link_both(twin_b(i), shared(i, j));
        }

        add_both(disc_a(i), names.draw(kScriptA, 10, &script_a_pool, 3),
                 names.draw(kDiscA, 12, &disc_a_pool, 2));
        add_both(disc_b(i), names.draw(kScriptA, 10, &script_a_pool, 3),
                 names.draw(kDiscB, 12, &disc_b_pool, 2));
        link_both(twin_a(i), disc_a(i));
        link_both(twin_b(i), disc_b(i));

        for (std::size_t j = 0; j < 2; ++j) {
            std::string aa = names.draw(j == 0 ? kAnchorLow : kAnchorHigh, 12,
                                        &targetish_pool, 4);
            std::string ab = names.draw(j == 0 ? kAnchorLow : kAnchorHigh, 12,
                                        &targetish_pool, 4);
            add_both(anchor_a(i, j), aa, aa);
            add_both(anchor_b(i, j), ab, ab);
            link_both(disc_a(i), anchor_a(i, j));
            link_both(disc_b(i), anchor_b(i, j));
        }
    }
    return c;
}

}  // namespace kgalign
