#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "moran/errors.hpp"
#include "moran/moran_spec.hpp"
#include "moran/root_find.hpp"

namespace moran {

/// Neumaier-compensated running sum; keeps prefix sums over 10^7+ levels at
/// working precision.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// log Δ_{k,k'}(s) = Σ_{i=k+1}^{k'} log Σ_j c_{i,j}^s. Strictly decreasing
/// in s; log Δ(0) ≥ (k'-k) log 2 > 0 and log Δ(d) ≤ 0 under the volume bound.
inline double log_delta(const MoranSpec& spec, std::int64_t k, std::int64_t k_hi, double s) {
    if (!(k >= 0 && k < k_hi))
        throw domain_error("log_delta requires 0 <= k < k', got k=" + std::to_string(k) +
                           " k'=" + std::to_string(k_hi));
    CompensatedSum acc;
    for (std::int64_t i = k + 1; i <= k_hi; ++i) acc.add(spec.level(i).log_sum_pow(s));
    return acc.value();
}

/// s_{k,k'}: the unique root of Δ_{k,k'}(s) = 1, located by bisection on the
/// exponent. Always lies in [0, d].
inline double solve_s_kk(const MoranSpec& spec, std::int64_t k, std::int64_t k_hi,
                         RootBracket bracket = {}) {
    if (!(k >= 0 && k < k_hi)) throw domain_error("solve_s_kk requires 0 <= k < k'");
    const double d = static_cast<double>(spec.ambient_dim());
    if (bracket.hi <= bracket.lo || bracket.hi > d) bracket = RootBracket{0.0, d, bracket.tol, bracket.max_iter};
    return bisect_decreasing([&](double s) { return log_delta(spec, k, k_hi, s); }, bracket, 0.0, d);
}

/// Streaming state for the homogeneous closed form
/// s_k = -(Σ log n_i)/(Σ log c_i); O(1) per level.
class HomogeneousSums {
public:
    explicit HomogeneousSums(const MoranSpec& spec) : cursor_(spec) {}

    /// Advance one level; returns the new level index.
    std::int64_t advance() {
        UniformSegment seg = cursor_.next();
        sum_log_n_.add(seg.log_count);
        sum_log_c_.add(seg.log_ratio);
        return cursor_.level();
    }

    std::int64_t level() const { return cursor_.level(); }
    double sum_log_count() const { return sum_log_n_.value(); }
    /// log |J_u| of any current-level word = log(c_1...c_k).
    double log_diam() const { return sum_log_c_.value(); }
    double s_k() const { return -sum_log_n_.value() / sum_log_c_.value(); }

private:
    UniformCursor cursor_;
    CompensatedSum sum_log_n_;
    CompensatedSum sum_log_c_;
};

/// s_k for a homogeneous spec via the running-sums state (advances the state
/// from its current level up to k).
inline double s_k_homogeneous(const MoranSpec& spec, std::int64_t k, HomogeneousSums& state) {
    if (!spec.homogeneous()) throw domain_error("s_k_homogeneous: spec is not homogeneous");
    if (state.level() > k)
        throw domain_error("s_k_homogeneous: state already past level " + std::to_string(k));
    while (state.level() < k) state.advance();
    return state.s_k();
}

inline double s_k_homogeneous(const MoranSpec& spec, std::int64_t k) {
    HomogeneousSums state(spec);
    return s_k_homogeneous(spec, k, state);
}

struct WindowEstimate {
    double value = 0.0;
    std::int64_t k_lo = 0, k_hi = 0;  // window the extremum was taken over
    std::int64_t arg_k = 0;           // level attaining it
};

struct ClassicEstimates {
    WindowEstimate s_star_est;       // min_k s_k over the window
    WindowEstimate s_upperstar_est;  // max_k s_k over the window
    /// (m, max_{k in window, k+m <= K_hi} s_{k,k+m}) pairs.
    std::vector<std::pair<std::int64_t, double>> s_doublestar_profile;
};

/// Window extrema of s_k plus the gap profile sup_k s_{k,k+m}. For
/// homogeneous specs everything streams off prefix sums; otherwise each
/// s_{k,k'} is an individual bisection.
inline ClassicEstimates classic_dim_estimates(const MoranSpec& spec, std::int64_t k_lo, std::int64_t k_hi,
                                              const std::vector<std::int64_t>& m_list = {}) {
    if (!(1 <= k_lo && k_lo < k_hi)) throw domain_error("classic_dim_estimates: need 1 <= K_lo < K_hi");
    ClassicEstimates est;
    est.s_star_est = {std::numeric_limits<double>::infinity(), k_lo, k_hi, 0};
    est.s_upperstar_est = {-std::numeric_limits<double>::infinity(), k_lo, k_hi, 0};

    if (spec.homogeneous()) {
        // One pass for the s_k extrema, recording prefix sums at the levels
        // the profile needs.
        HomogeneousSums sums(spec);
        bool want_profile = !m_list.empty();
        std::vector<double> pref_n, pref_c;
        if (want_profile) {
            pref_n.assign(static_cast<std::size_t>(k_hi - k_lo + 2), 0.0);
            pref_c.assign(static_cast<std::size_t>(k_hi - k_lo + 2), 0.0);
        }
        for (std::int64_t k = 1; k <= k_hi; ++k) {
            sums.advance();
            if (k >= k_lo - 1 && want_profile) {
                pref_n[static_cast<std::size_t>(k - (k_lo - 1))] = sums.sum_log_count();
                pref_c[static_cast<std::size_t>(k - (k_lo - 1))] = sums.log_diam();
            }
            if (k < k_lo) continue;
            double s = sums.s_k();
            if (s < est.s_star_est.value) est.s_star_est = {s, k_lo, k_hi, k};
            if (s > est.s_upperstar_est.value) est.s_upperstar_est = {s, k_lo, k_hi, k};
        }
        for (std::int64_t m : m_list) {
            if (m < 1 || k_lo + m > k_hi) continue;
            double best = -std::numeric_limits<double>::infinity();
            for (std::int64_t k = k_lo; k + m <= k_hi; ++k) {
                auto at = [&](std::int64_t lvl) { return static_cast<std::size_t>(lvl - (k_lo - 1)); };
                double dn = pref_n[at(k + m)] - pref_n[at(k)];
                double dc = pref_c[at(k + m)] - pref_c[at(k)];
                best = std::max(best, -dn / dc);
            }
            est.s_doublestar_profile.emplace_back(m, best);
        }
        return est;
    }

    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        double s = solve_s_kk(spec, 0, k);
        if (s < est.s_star_est.value) est.s_star_est = {s, k_lo, k_hi, k};
        if (s > est.s_upperstar_est.value) est.s_upperstar_est = {s, k_lo, k_hi, k};
    }
    for (std::int64_t m : m_list) {
        if (m < 1 || k_lo + m > k_hi) continue;
        double best = -std::numeric_limits<double>::infinity();
        for (std::int64_t k = k_lo; k + m <= k_hi; ++k) best = std::max(best, solve_s_kk(spec, k, k + m));
        est.s_doublestar_profile.emplace_back(m, best);
    }
    return est;
}

}  // namespace moran
