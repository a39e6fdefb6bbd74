#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "moran/errors.hpp"
#include "moran/ratio_vector.hpp"

namespace moran {

/// Levels are addressable up to this bound; deeper queries are a
/// configuration error, not a numeric one.
inline constexpr std::int64_t kMaxLevel = std::int64_t{1} << 31;

/// Uniform per-level parameters plus the last level sharing them, so sweeps
/// can advance in O(1) amortized without re-resolving block membership.
struct UniformSegment {
    double log_count = 0.0;
    double log_ratio = 0.0;
    std::int64_t end = 0;  // parameters are valid for levels k..end
};

namespace detail {

/// Strictly increasing block boundaries b_1 < b_2 < ...; block j is the
/// level interval (b_{j-1}, b_j] with b_0 = 0. Fully materialized up to
/// kMaxLevel at construction, so lookups are read-only and thread-safe.
class Boundaries {
public:
    /// b_m = (m!)^2 for m = 1, 2, ...
    static Boundaries factorial_square() {
        Boundaries b;
        double fact = 1.0;
        for (std::int64_t m = 1;; ++m) {
            fact *= static_cast<double>(m);
            double sq = fact * fact;
            if (sq > static_cast<double>(kMaxLevel) * 2.0) break;
            std::int64_t f = 1;
            for (std::int64_t i = 2; i <= m; ++i) f *= i;
            b.values_.push_back(f * f);
        }
        b.values_.push_back(kMaxLevel * 4);  // open-ended final block
        return b;
    }

    /// b_j = L + L^2 + ... + L^j.
    static Boundaries geometric_sum(std::int64_t L) {
        if (L < 2) throw domain_error("geometric boundaries require L >= 2");
        Boundaries b;
        std::int64_t sum = 0, pow = 1;
        while (true) {
            if (pow > (kMaxLevel * 4) / L) break;
            pow *= L;
            sum += pow;
            b.values_.push_back(sum);
            if (sum > kMaxLevel * 2) break;
        }
        b.values_.push_back(kMaxLevel * 4);
        return b;
    }

    /// 1-based index of the block containing level k.
    std::size_t block_of(std::int64_t k) const {
        std::size_t lo = 0, hi = values_.size();
        while (lo < hi) {  // first boundary >= k
            std::size_t mid = (lo + hi) / 2;
            if (values_[mid] < k) lo = mid + 1; else hi = mid;
        }
        return lo + 1;
    }

    std::int64_t end_of_block(std::size_t j) const { return values_[j - 1]; }

private:
    std::vector<std::int64_t> values_;
};

}  // namespace detail

/// The level rule: produces (n_k, φ_k) for every level k >= 1.
class LevelRule {
public:
    enum class Tail { error, repeat_last };
    enum class BoundaryKind { factorial_square, geometric_sum };
    enum class Formula {
        pow2_geom3,   // n_k = 2^k, c_k = 3^-(k+1)
        double_exp,   // n_k = 2,   c_k = 2^-(2^k)
    };

    struct Explicit {
        std::vector<RatioVector> levels;
        Tail tail = Tail::error;
    };
    struct Periodic {
        std::vector<RatioVector> period;
    };
    /// Uniform blocks between precomputed boundaries; the (n, c) cycle is
    /// applied per block index, with an optional override for level 1.
    struct BlockSchedule {
        BoundaryKind kind = BoundaryKind::factorial_square;
        std::int64_t geometric_base = 0;  // L, when kind == geometric_sum
        std::vector<std::pair<std::int64_t, double>> cycle;  // (n, log c) per block, cycled
        std::int64_t level1_n = 0;  // 0 = no override
        double level1_log_c = 0.0;
    };
    struct Named {
        Formula formula = Formula::pow2_geom3;
    };
    /// Coordinate product: n'_k = n_a(k) * n_b(k), common ratio required.
    struct Product {
        std::shared_ptr<const LevelRule> a, b;
    };

    static LevelRule make_explicit(std::vector<RatioVector> levels, Tail tail) {
        if (levels.empty()) throw domain_error("explicit rule needs at least one level");
        LevelRule r;
        r.v_ = Explicit{std::move(levels), tail};
        return r;
    }
    static LevelRule make_periodic(std::vector<RatioVector> period) {
        if (period.empty()) throw domain_error("periodic rule needs at least one level");
        LevelRule r;
        r.v_ = Periodic{std::move(period)};
        return r;
    }
    static LevelRule make_constant(std::int64_t n, double ratio) {
        return make_periodic({RatioVector::uniform(n, std::log(ratio))});
    }
    static LevelRule make_blocks(BlockSchedule schedule) {
        if (schedule.cycle.empty()) throw domain_error("block schedule needs a non-empty cycle");
        LevelRule r;
        r.boundaries_ = std::make_shared<detail::Boundaries>(
            schedule.kind == BoundaryKind::factorial_square
                ? detail::Boundaries::factorial_square()
                : detail::Boundaries::geometric_sum(schedule.geometric_base));
        r.v_ = std::move(schedule);
        return r;
    }
    static LevelRule make_formula(Formula f) {
        LevelRule r;
        r.v_ = Named{f};
        return r;
    }
    static LevelRule make_product(std::shared_ptr<const LevelRule> a, std::shared_ptr<const LevelRule> b) {
        LevelRule r;
        r.v_ = Product{std::move(a), std::move(b)};
        return r;
    }

    /// Full per-level ratio vector (1-based level).
    RatioVector level(std::int64_t k) const {
        check_level(k);
        if (auto* e = std::get_if<Explicit>(&v_)) {
            auto n = static_cast<std::int64_t>(e->levels.size());
            if (k <= n) return e->levels[static_cast<std::size_t>(k - 1)];
            if (e->tail == Tail::repeat_last) return e->levels.back();
            throw domain_error("level " + std::to_string(k) + ": rule defines only " +
                               std::to_string(n) + " levels and has no tail policy");
        }
        if (auto* p = std::get_if<Periodic>(&v_))
            return p->period[static_cast<std::size_t>((k - 1) % static_cast<std::int64_t>(p->period.size()))];
        if (std::holds_alternative<BlockSchedule>(v_) || std::holds_alternative<Named>(v_)) {
            UniformSegment seg = uniform_segment(k);
            return RatioVector::uniform_log(seg.log_count, seg.log_ratio);
        }
        const auto& pr = std::get<Product>(v_);
        RatioVector a = pr.a->level(k), b = pr.b->level(k);
        require_matching_product(a, b, k);
        return RatioVector::uniform_log(a.log_count() + b.log_count(), a.max_log_ratio());
    }

    /// Uniform parameters for level k plus their validity horizon.
    /// Throws for non-uniform levels; this is the homogeneous fast path.
    UniformSegment uniform_segment(std::int64_t k) const {
        check_level(k);
        if (auto* e = std::get_if<Explicit>(&v_)) {
            auto n = static_cast<std::int64_t>(e->levels.size());
            const RatioVector& rv = (k <= n) ? e->levels[static_cast<std::size_t>(k - 1)]
                                             : (e->tail == Tail::repeat_last
                                                    ? e->levels.back()
                                                    : throw domain_error("level " + std::to_string(k) +
                                                                         ": rule exhausted without tail policy"));
            require_uniform(rv, k);
            return {rv.log_count(), rv.max_log_ratio(), k >= n ? kMaxLevel : k};
        }
        if (auto* p = std::get_if<Periodic>(&v_)) {
            const RatioVector& rv =
                p->period[static_cast<std::size_t>((k - 1) % static_cast<std::int64_t>(p->period.size()))];
            require_uniform(rv, k);
            return {rv.log_count(), rv.max_log_ratio(), p->period.size() == 1 ? kMaxLevel : k};
        }
        if (auto* b = std::get_if<BlockSchedule>(&v_)) {
            if (k == 1 && b->level1_n > 0)
                return {std::log(static_cast<double>(b->level1_n)), b->level1_log_c, 1};
            std::size_t j = boundaries_->block_of(k);
            const auto& [n, log_c] = b->cycle[(j - 1) % b->cycle.size()];
            return {std::log(static_cast<double>(n)), log_c, boundaries_->end_of_block(j)};
        }
        if (auto* f = std::get_if<Named>(&v_)) {
            switch (f->formula) {
                case Formula::pow2_geom3:
                    return {static_cast<double>(k) * kLog2, -static_cast<double>(k + 1) * kLog3, k};
                case Formula::double_exp: {
                    double log_c = -std::exp2(static_cast<double>(k)) * kLog2;
                    if (!std::isfinite(log_c))
                        throw domain_error("double_exp rule: level " + std::to_string(k) +
                                           " underflows the log-ratio range");
                    return {kLog2, log_c, k};
                }
            }
        }
        const auto& pr = std::get<Product>(v_);
        UniformSegment a = pr.a->uniform_segment(k);
        UniformSegment b = pr.b->uniform_segment(k);
        if (!log_close(a.log_ratio, b.log_ratio))
            throw domain_error("product rule: factor ratios differ at level " + std::to_string(k));
        return {a.log_count + b.log_count, a.log_ratio, std::min(a.end, b.end)};
    }

    /// True when every level this rule can produce is uniform.
    bool uniform_throughout() const {
        if (auto* e = std::get_if<Explicit>(&v_)) {
            for (const auto& rv : e->levels)
                if (!rv.is_uniform()) return false;
            return true;
        }
        if (auto* p = std::get_if<Periodic>(&v_)) {
            for (const auto& rv : p->period)
                if (!rv.is_uniform()) return false;
            return true;
        }
        if (auto* pr = std::get_if<Product>(&v_))
            return pr->a->uniform_throughout() && pr->b->uniform_throughout();
        return true;  // blocks and formulas are uniform by construction
    }

    static bool log_close(double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    }

private:
    static constexpr double kLog2 = 0.6931471805599453;
    static constexpr double kLog3 = 1.0986122886681098;

    static void check_level(std::int64_t k) {
        if (k < 1) throw domain_error("level must be >= 1, got " + std::to_string(k));
        if (k > kMaxLevel) throw domain_error("level " + std::to_string(k) + " exceeds the 2^31 level bound");
    }
    static void require_uniform(const RatioVector& rv, std::int64_t k) {
        if (!rv.is_uniform())
            throw domain_error("level " + std::to_string(k) + " is not uniform; homogeneous path unavailable");
    }
    static void require_matching_product(const RatioVector& a, const RatioVector& b, std::int64_t k) {
        if (!a.is_uniform() || !b.is_uniform())
            throw domain_error("product rule requires homogeneous factors (level " + std::to_string(k) + ")");
        if (!log_close(a.max_log_ratio(), b.max_log_ratio()))
            throw domain_error("product rule: factor ratios differ at level " + std::to_string(k));
    }

    std::variant<Explicit, Periodic, BlockSchedule, Named, Product> v_;
    std::shared_ptr<const detail::Boundaries> boundaries_;  // block schedules only
};

}  // namespace moran
