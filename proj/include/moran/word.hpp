#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moran/errors.hpp"
#include "moran/moran_spec.hpp"

namespace moran {

/// A finite address u in Σ*: child indices u_1..u_k (1-based) together with
/// log |J_u|. The empty word is the root with log diameter 0.
struct Word {
    std::vector<std::int32_t> path;
    double log_diam = 0.0;

    std::int64_t level() const { return static_cast<std::int64_t>(path.size()); }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i) s.push_back('.');
            s += std::to_string(path[i]);
        }
        return s.empty() ? "<root>" : s;
    }
};

/// log |J_u| for the address `path`, validating every index along the way.
inline double log_diameter(const MoranSpec& spec, const std::vector<std::int32_t>& path) {
    double acc = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        RatioVector rv = spec.level(static_cast<std::int64_t>(i + 1));
        std::int64_t j = path[i];
        if (j < 1 || (rv.count() && j > *rv.count()))
            throw domain_error("word index " + std::to_string(j) + " out of range at level " +
                               std::to_string(i + 1));
        acc += rv.log_ratio(j);
    }
    return acc;
}

inline Word make_word(const MoranSpec& spec, std::vector<std::int32_t> path) {
    double ld = log_diameter(spec, path);
    return Word{std::move(path), ld};
}

/// A finite prefix-free covering family of words with its extreme levels.
struct CutSet {
    std::vector<Word> words;
    std::int64_t min_level = 0;  // L_M
    std::int64_t max_level = 0;  // K_M

    static CutSet from_words(std::vector<Word> ws) {
        CutSet cs;
        cs.words = std::move(ws);
        if (!cs.words.empty()) {
            auto [lo, hi] = std::minmax_element(
                cs.words.begin(), cs.words.end(),
                [](const Word& a, const Word& b) { return a.level() < b.level(); });
            cs.min_level = lo->level();
            cs.max_level = hi->level();
        }
        return cs;
    }
};

struct CutSetCheck {
    bool ok = false;
    /// On overlap: the offending (ancestor, descendant) pair.
    std::optional<std::pair<Word, Word>> overlap;
    /// On a coverage gap: a prefix none of whose extensions meet the family.
    std::optional<std::vector<std::int32_t>> uncovered_prefix;
};

namespace detail {

struct TrieNode {
    std::map<std::int32_t, TrieNode> children;
    std::int32_t member = -1;  // index into the word list, -1 if none
};

inline bool trie_covered(const MoranSpec& spec, const TrieNode& node,
                         std::vector<std::int32_t>& prefix, const std::vector<Word>& words,
                         CutSetCheck& out) {
    if (node.member >= 0) {
        if (!node.children.empty()) {
            // A member with stored descendants: find one to report.
            const TrieNode* child = &node.children.begin()->second;
            while (child->member < 0) child = &child->children.begin()->second;
            out.overlap = {words[static_cast<std::size_t>(node.member)],
                           words[static_cast<std::size_t>(child->member)]};
            return false;
        }
        return true;
    }
    std::int64_t level = static_cast<std::int64_t>(prefix.size()) + 1;
    RatioVector rv = spec.level(level);
    std::int64_t n = rv.count_or_throw(level);
    if (n > 1'000'000)
        throw resource_error("is_cut_set: level " + std::to_string(level) + " has " +
                             std::to_string(n) + " children; coverage check refused");
    for (std::int32_t j = 1; j <= n; ++j) {
        auto it = node.children.find(j);
        if (it == node.children.end()) {
            prefix.push_back(j);
            out.uncovered_prefix = prefix;
            prefix.pop_back();
            return false;
        }
        prefix.push_back(j);
        bool ok = trie_covered(spec, it->second, prefix, words, out);
        prefix.pop_back();
        if (!ok) return false;
    }
    return true;
}

}  // namespace detail

/// True iff `words` is prefix-free and its cylinders cover every branch.
/// On failure the witness identifies either an overlapping pair or an
/// uncovered branch prefix.
inline CutSetCheck is_cut_set(const MoranSpec& spec, const std::vector<Word>& words) {
    CutSetCheck out;
    if (words.empty()) {
        out.uncovered_prefix = std::vector<std::int32_t>{};
        return out;
    }
    detail::TrieNode root;
    for (std::size_t i = 0; i < words.size(); ++i) {
        detail::TrieNode* node = &root;
        for (std::int32_t j : words[i].path) node = &node->children[j];
        if (node->member >= 0) {
            out.overlap = {words[static_cast<std::size_t>(node->member)], words[i]};
            return out;
        }
        node->member = static_cast<std::int32_t>(i);
    }
    std::vector<std::int32_t> prefix;
    out.ok = detail::trie_covered(spec, root, prefix, words, out);
    return out;
}

}  // namespace moran
