#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "moran/band.hpp"
#include "moran/classic_dims.hpp"
#include "moran/errors.hpp"
#include "moran/moran_spec.hpp"
#include "moran/word.hpp"

namespace moran {

/// Caps for the exhaustive path. Enumeration aborts cleanly past either cap.
struct EnumerationBudget {
    std::int64_t max_nodes = 200'000;
    std::int64_t max_cut_sets = 200'000;
};

namespace oracle_detail {

// The oracle keeps its own admissibility logic and recursion so it stays an
// independent check of the DP path.
inline bool oracle_select_ok(const AdmissibleBand& b, double log_diam, double parent_log_diam) {
    return log_diam <= b.log_delta_cov + log_tol(b.log_delta_cov) &&
           parent_log_diam > b.log_delta_fine + log_tol(b.log_delta_fine);
}
inline bool oracle_recurse_ok(const AdmissibleBand& b, double log_diam) {
    return log_diam > b.log_delta_fine + log_tol(b.log_delta_fine);
}

struct Frame {
    std::vector<std::int32_t> path;
    double log_diam;
};

// Appends to `out` every admissible cut set of the subtree at `node`,
// each expressed as a list of member words. Cartesian composition over
// children implements RECURSE.
inline void enumerate_subtree(const MoranSpec& spec, const AdmissibleBand& band, const Frame& node,
                              double parent_log_diam, const EnumerationBudget& budget,
                              std::int64_t& nodes_seen, std::vector<std::vector<Word>>& out) {
    if (++nodes_seen > budget.max_nodes)
        throw resource_error("oracle enumeration: node budget exceeded");
    out.clear();
    bool is_root = node.path.empty();
    if (!is_root && oracle_select_ok(band, node.log_diam, parent_log_diam))
        out.push_back({Word{node.path, node.log_diam}});
    if (!oracle_recurse_ok(band, node.log_diam)) return;

    std::int64_t level = static_cast<std::int64_t>(node.path.size()) + 1;
    RatioVector rv = spec.level(level);
    std::int64_t n = rv.count_or_throw(level);
    std::vector<std::vector<Word>> partial;  // cut sets of the children seen so far, combined
    partial.push_back({});
    std::vector<std::vector<Word>> child_sets;
    for (std::int64_t j = 1; j <= n; ++j) {
        Frame child;
        child.path = node.path;
        child.path.push_back(static_cast<std::int32_t>(j));
        child.log_diam = node.log_diam + rv.log_ratio(j);
        enumerate_subtree(spec, band, child, node.log_diam, budget, nodes_seen, child_sets);
        if (child_sets.empty()) return;  // child infeasible: no completed expansion here
        std::vector<std::vector<Word>> next;
        if (partial.size() * child_sets.size() >
            static_cast<std::size_t>(budget.max_cut_sets))
            throw resource_error("oracle enumeration: cut-set budget exceeded");
        next.reserve(partial.size() * child_sets.size());
        for (const auto& left : partial)
            for (const auto& right : child_sets) {
                std::vector<Word> merged = left;
                merged.insert(merged.end(), right.begin(), right.end());
                next.push_back(std::move(merged));
            }
        partial = std::move(next);
    }
    for (auto& p : partial) out.push_back(std::move(p));
    if (static_cast<std::int64_t>(out.size()) > budget.max_cut_sets)
        throw resource_error("oracle enumeration: cut-set budget exceeded");
}

inline double count_subtree(const MoranSpec& spec, const AdmissibleBand& band,
                            std::int64_t level, double log_diam, double parent_log_diam) {
    double count = 0.0;
    if (level > 0 && oracle_select_ok(band, log_diam, parent_log_diam)) count += 1.0;
    if (oracle_recurse_ok(band, log_diam)) {
        RatioVector rv = spec.level(level + 1);
        std::int64_t n = rv.count_or_throw(level + 1);
        double prod = 1.0;
        for (std::int64_t j = 1; j <= n && prod < 1e18; ++j)
            prod *= count_subtree(spec, band, level + 1, log_diam + rv.log_ratio(j), log_diam);
        count += prod;
    }
    return count;
}

}  // namespace oracle_detail

/// Every admissible cut set for (spec, band), generated by SELECT/RECURSE
/// branching. Exhaustive: each admissible cut set appears exactly once.
inline std::vector<CutSet> enumerate_admissible_cut_sets(const MoranSpec& spec,
                                                         const AdmissibleBand& band,
                                                         const EnumerationBudget& budget = {}) {
    std::vector<std::vector<Word>> raw;
    std::int64_t nodes_seen = 0;
    oracle_detail::Frame root{{}, 0.0};
    oracle_detail::enumerate_subtree(spec, band, root, std::numeric_limits<double>::infinity(),
                                     budget, nodes_seen, raw);
    std::vector<CutSet> out;
    out.reserve(raw.size());
    for (auto& ws : raw) out.push_back(CutSet::from_words(std::move(ws)));
    return out;
}

/// Closed-form count of admissible cut sets:
/// count(u) = [select ok] + [recurse ok] * Π_children count. Saturates above
/// 1e18 rather than overflowing.
inline double count_admissible_cut_sets(const MoranSpec& spec, const AdmissibleBand& band) {
    return oracle_detail::count_subtree(spec, band, 0, 0.0,
                                        std::numeric_limits<double>::infinity());
}

/// Root of Σ_{u in M} |J_u|^s = 1 for one explicit cut set. Kept as a plain
/// scan-free bisection local to the oracle.
inline double cut_set_root(const CutSet& cs, double d, double tol = 1e-12) {
    if (cs.words.empty()) throw domain_error("cut_set_root: empty cut set");
    auto sum_pow = [&](double s) {
        double acc = 0.0;
        for (const Word& w : cs.words) acc += std::exp(s * w.log_diam);
        return acc;
    };
    double lo = 0.0, hi = d;
    if (sum_pow(lo) < 1.0) throw domain_error("cut_set_root: sum below 1 at s = 0");
    for (int it = 0; it < 200 && (hi - lo) > 2.0 * tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sum_pow(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Direct transcription of the s_{δ,θ} definition: enumerate every
/// admissible cut set, solve each sum-equation, return the smallest root.
inline double brute_force_s_delta_theta(const MoranSpec& spec, const AdmissibleBand& band,
                                        const EnumerationBudget& budget = {}) {
    std::vector<CutSet> sets = enumerate_admissible_cut_sets(spec, band, budget);
    if (sets.empty()) throw domain_error("brute_force_s_delta_theta: no admissible cut set");
    double best = std::numeric_limits<double>::infinity();
    for (const CutSet& cs : sets)
        best = std::min(best, cut_set_root(cs, static_cast<double>(spec.ambient_dim())));
    return best;
}

/// Lemma check: for β below every s_k with L_M <= k <= K_M, the cut-set sum
/// Σ |J_u|^β must exceed 1. A false return reports a bug, not a result.
inline bool lemma_sum_check(const MoranSpec& spec, const CutSet& cs, double beta) {
    if (cs.words.empty() || cs.min_level < 1)
        throw domain_error("lemma_sum_check: cut set must be non-empty with positive levels");
    double min_sk = std::numeric_limits<double>::infinity();
    for (std::int64_t k = cs.min_level; k <= cs.max_level; ++k)
        min_sk = std::min(min_sk, spec.homogeneous() ? s_k_homogeneous(spec, k) : solve_s_kk(spec, 0, k));
    if (!(beta < min_sk))
        throw domain_error("lemma_sum_check: β must be below min s_k = " + std::to_string(min_sk));
    double acc = 0.0;
    for (const Word& w : cs.words) acc += std::exp(beta * w.log_diam);
    return acc > 1.0;
}

/// Deterministic generator for the randomized verification battery:
/// depth <= 6, n_k in {2,3}, ratios from a fixed palette subject to the
/// volume bound.
class RandomSpecSource {
public:
    explicit RandomSpecSource(std::uint64_t seed) : rng_(seed) {}

    MoranSpec next_spec(std::int64_t depth = 6) {
        static const double palette[] = {0.2, 0.25, 1.0 / 3.0, 0.4};
        std::vector<RatioVector> levels;
        levels.reserve(static_cast<std::size_t>(depth));
        for (std::int64_t k = 0; k < depth; ++k) {
            std::int64_t n = 2 + static_cast<std::int64_t>(rng_() % 2);
            std::vector<double> ratios;
            do {
                ratios.clear();
                double sum = 0.0;
                for (std::int64_t j = 0; j < n; ++j) {
                    double c = palette[rng_() % 4];
                    ratios.push_back(c);
                    sum += c;
                }
                if (sum <= 1.0) break;
            } while (true);
            levels.push_back(RatioVector::from_ratios(ratios));
        }
        return MoranSpec(1, LevelRule::make_explicit(std::move(levels), LevelRule::Tail::error));
    }

    /// A band whose truncated tree stays inside the rule's depth and whose
    /// enumeration stays inside `budget`.
    AdmissibleBand next_band(const MoranSpec& spec, const EnumerationBudget& budget,
                             std::int64_t rule_depth = 6) {
        auto [log_m_deep, ignored] = extreme_diameters(spec, rule_depth);
        (void)ignored;
        for (int attempt = 0; attempt < 256; ++attempt) {
            std::int64_t k_fine = 2 + static_cast<std::int64_t>(rng_() % (rule_depth - 1));
            auto [log_m, lvl_min] = extreme_diameters(spec, k_fine);
            (void)lvl_min;
            double log_fine = log_m * (0.6 + 0.39 * uniform01());
            if (log_fine < log_m_deep) continue;  // would recurse past the rule's depth
            double theta = 0.3 + 0.7 * uniform01();
            double log_cov = theta * log_fine;
            if (!(log_cov < -1e-9)) continue;
            AdmissibleBand band(log_cov, theta);
            double count = count_admissible_cut_sets(spec, band);
            if (count >= 1.0 && count <= static_cast<double>(budget.max_cut_sets) * 0.5) return band;
        }
        throw resource_error("random band generation failed to meet the enumeration budget");
    }

    std::uint64_t raw() { return rng_(); }
    double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }

private:
    std::mt19937_64 rng_;
};

}  // namespace moran
