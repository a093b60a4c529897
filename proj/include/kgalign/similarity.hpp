#pragma once

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgalign {

namespace detail {

// Decodes UTF-8 into codepoints so edit distance counts characters, not
// bytes (CJK names would otherwise be penalized 3x). Invalid bytes are kept
// as-is, one codepoint per byte. ASCII letters are lowercased; case folding
// beyond ASCII is out of scope for a desk matcher.
inline std::vector<uint32_t> decode_folded(std::string_view s) {
    std::vector<uint32_t> cps;
    cps.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char b = static_cast<unsigned char>(s[i]);
        uint32_t cp = b;
        std::size_t len = 1;
        if (b >= 0xF0) len = 4;
        else if (b >= 0xE0) len = 3;
        else if (b >= 0xC0) len = 2;
        if (len > 1 && i + len <= s.size()) {
            cp = b & (0x7F >> len);
            bool ok = true;
            for (std::size_t k = 1; k < len; ++k) {
                unsigned char c = static_cast<unsigned char>(s[i + k]);
                if ((c & 0xC0) != 0x80) { ok = false; break; }
                cp = (cp << 6) | (c & 0x3F);
            }
            if (!ok) { cp = b; len = 1; }
        } else {
            len = 1;
        }
        if (cp >= 'A' && cp <= 'Z') cp += 'a' - 'A';
        cps.push_back(cp);
        i += len;
    }
    return cps;
}

inline std::size_t levenshtein(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

}  // namespace detail

// 1 - normalized edit distance over case-folded codepoints. Symmetric,
// in [0,1], and exactly 1.0 iff the strings are equal after folding.
// Two empty strings compare equal.
inline double name_similarity(std::string_view a, std::string_view b) {
    auto ca = detail::decode_folded(a);
    auto cb = detail::decode_folded(b);
    std::size_t longest = std::max(ca.size(), cb.size());
    if (longest == 0) return 1.0;
    std::size_t dist = detail::levenshtein(ca, cb);
    return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

// Memo for repeated name pairs: candidate scoring compares the same small
// set of surface strings over and over. Sharded so concurrent scorers can
// share one cache without serializing on a single lock. Keys are the surface
// strings themselves, so surface substitution naturally produces fresh
// entries instead of stale hits.
class SimilarityCache {
public:
    double operator()(const std::string& a, const std::string& b) {
        Key key = a <= b ? Key{a, b} : Key{b, a};
        Shard& shard = shards_[shard_index(key)];
        {
            std::lock_guard<std::mutex> lock(shard.mutex);
            auto it = shard.map.find(key);
            if (it != shard.map.end()) return it->second;
        }
        double sim = name_similarity(key.first, key.second);
        std::lock_guard<std::mutex> lock(shard.mutex);
        shard.map.emplace(std::move(key), sim);
        return sim;
    }

    std::size_t size() const {
        std::size_t total = 0;
        for (const Shard& s : shards_) {
            std::lock_guard<std::mutex> lock(s.mutex);
            total += s.map.size();
        }
        return total;
    }

private:
    using Key = std::pair<std::string, std::string>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = std::hash<std::string>{}(k.first);
            return h ^ (std::hash<std::string>{}(k.second) + 0x9e3779b97f4a7c15ULL + (h << 6));
        }
    };
    struct Shard {
        mutable std::mutex mutex;
        std::unordered_map<Key, double, KeyHash> map;
    };
    static constexpr std::size_t kShards = 16;

    std::size_t shard_index(const Key& k) const { return KeyHash{}(k) % kShards; }

    Shard shards_[kShards];
};

}  // namespace kgalign
