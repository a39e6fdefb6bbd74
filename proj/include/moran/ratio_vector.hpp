#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "moran/errors.hpp"

namespace moran {

/// One level of a Moran construction: the contraction ratios of the n_k
/// children of every level-(k-1) node. Ratios are stored as natural logs so
/// that levels like c_k = 3^-(k+1) stay representable at depth 10^3+.
///
/// Two storage forms:
///  - uniform: all n children share one ratio. The child count is carried in
///    log form as well, since rules like n_k = 2^k outgrow int64 around
///    level 63; `count()` is only available while it fits.
///  - general: an explicit list of per-child log ratios.
class RatioVector {
public:
    static RatioVector uniform(std::int64_t n, double log_ratio) {
        if (n < 1) throw domain_error("RatioVector: child count must be >= 1, got " + std::to_string(n));
        RatioVector rv;
        rv.uniform_ = true;
        rv.count_ = n;
        rv.log_count_ = std::log(static_cast<double>(n));
        rv.uniform_log_ratio_ = log_ratio;
        return rv;
    }

    /// Uniform level whose child count is given only in log form (n = e^log_count).
    static RatioVector uniform_log(double log_count, double log_ratio) {
        RatioVector rv;
        rv.uniform_ = true;
        rv.log_count_ = log_count;
        rv.uniform_log_ratio_ = log_ratio;
        // Recover the exact integer when it is unambiguous.
        if (log_count < 43.0) {  // e^43 ~ 4.7e18, near the int64 edge
            double n = std::round(std::exp(log_count));
            if (n >= 1.0 && n <= 9.0e18 && std::abs(std::exp(log_count) - n) < 1e-6 * n)
                rv.count_ = static_cast<std::int64_t>(n);
        }
        return rv;
    }

    static RatioVector from_ratios(const std::vector<double>& ratios) {
        if (ratios.empty()) throw domain_error("RatioVector: empty ratio list");
        std::vector<double> logs;
        logs.reserve(ratios.size());
        for (double c : ratios) {
            if (!(c > 0.0)) throw domain_error("RatioVector: ratios must be positive");
            logs.push_back(std::log(c));
        }
        return from_log_ratios(std::move(logs));
    }

    static RatioVector from_log_ratios(std::vector<double> log_ratios) {
        if (log_ratios.empty()) throw domain_error("RatioVector: empty ratio list");
        // Collapse to the uniform form when all entries agree exactly.
        bool all_equal = std::all_of(log_ratios.begin(), log_ratios.end(),
                                     [&](double v) { return v == log_ratios.front(); });
        if (all_equal)
            return uniform(static_cast<std::int64_t>(log_ratios.size()), log_ratios.front());
        RatioVector rv;
        rv.uniform_ = false;
        rv.count_ = static_cast<std::int64_t>(log_ratios.size());
        rv.log_count_ = std::log(static_cast<double>(log_ratios.size()));
        rv.log_ratios_ = std::move(log_ratios);
        return rv;
    }

    bool is_uniform() const { return uniform_; }

    /// log n_k. Always available.
    double log_count() const { return log_count_; }

    /// n_k as an integer, when it is representable.
    std::optional<std::int64_t> count() const { return count_; }

    /// n_k as an integer, or a domain error naming the level context.
    std::int64_t count_or_throw(std::int64_t level) const {
        if (!count_)
            throw domain_error("level " + std::to_string(level) +
                               ": child count exceeds integer range; only log-space sweeps are possible");
        return *count_;
    }

    /// log c_{k,j}, with j 1-based.
    double log_ratio(std::int64_t j) const {
        if (j < 1 || (count_ && j > *count_))
            throw domain_error("child index " + std::to_string(j) + " out of range");
        if (uniform_) return uniform_log_ratio_;
        return log_ratios_[static_cast<std::size_t>(j - 1)];
    }

    double max_log_ratio() const {
        if (uniform_) return uniform_log_ratio_;
        return *std::max_element(log_ratios_.begin(), log_ratios_.end());
    }

    /// log of the level's smallest ratio (log c̲_k).
    double min_log_ratio() const {
        if (uniform_) return uniform_log_ratio_;
        return *std::min_element(log_ratios_.begin(), log_ratios_.end());
    }

    /// log Σ_j c_{k,j}^s, evaluated stably in log space.
    double log_sum_pow(double s) const {
        if (uniform_) return log_count_ + s * uniform_log_ratio_;
        double m = *std::max_element(log_ratios_.begin(), log_ratios_.end()) * s;
        double acc = 0.0;
        for (double lr : log_ratios_) acc += std::exp(s * lr - m);
        return m + std::log(acc);
    }

    const std::vector<double>& explicit_log_ratios() const { return log_ratios_; }

private:
    bool uniform_ = true;
    std::optional<std::int64_t> count_;
    double log_count_ = 0.0;
    double uniform_log_ratio_ = 0.0;
    std::vector<double> log_ratios_;  // empty in the uniform form
};

}  // namespace moran
