#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "moran/band.hpp"
#include "moran/classic_dims.hpp"
#include "moran/cutset_dp.hpp"
#include "moran/errors.hpp"
#include "moran/moran_spec.hpp"

namespace moran {

/// How a depth budget maps to the window the limit estimates are taken over.
/// Linear scale keeps the last tail_fraction of levels; log scale keeps the
/// last tail_fraction of log-depth, i.e. [D^(1-f), D], which is what block
/// constructions with factorial or geometric boundaries need to see a full
/// block period.
struct WindowPolicy {
    enum class Scale { linear, log };
    Scale scale = Scale::linear;
    double tail_fraction = 0.5;
    double converge_tol = 5e-3;

    std::int64_t window_start(std::int64_t depth) const {
        if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
            throw domain_error("window policy: tail_fraction must lie in (0,1]");
        std::int64_t lo;
        if (scale == Scale::linear) {
            lo = depth - static_cast<std::int64_t>(std::ceil(tail_fraction * static_cast<double>(depth))) + 1;
        } else {
            lo = static_cast<std::int64_t>(
                std::ceil(std::pow(static_cast<double>(depth), 1.0 - tail_fraction)));
        }
        return std::clamp<std::int64_t>(lo, 1, depth);
    }

    std::string describe(std::int64_t depth) const {
        return std::string(scale == Scale::linear ? "linear" : "log") +
               " tail_fraction=" + std::to_string(tail_fraction) + " window=[" +
               std::to_string(window_start(depth)) + "," + std::to_string(depth) + "]";
    }
};

struct SpectrumPoint {
    double theta = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    double upper_window2 = 0.0;  // same estimator at half depth
    double lower_window2 = 0.0;
    bool converged = false;
    bool definitional = false;  // θ = 0 rows report the s_* estimate by convention
};

struct CStarDiagnostic {
    std::vector<std::pair<std::int64_t, double>> samples;  // (k, log c̲_k / log M_k)
    double ratio_start = 0.0, ratio_mid = 0.0, ratio_end = 0.0;
    bool decreasing = false;
    bool vanishing = false;  // end ratio well below the midpoint ratio
};

struct SpectrumResult {
    std::vector<SpectrumPoint> points;
    std::int64_t depth = 0;
    WindowPolicy policy;
    /// "" when the window infimum of the ratios stays bounded away from 0;
    /// otherwise the vanishing-ratio hypothesis label.
    std::string label;
    CStarDiagnostic c_star;
};

/// Hypothesis diagnostic for the c_* = 0 regime: the sequence
/// log c̲_k / log M_k over the window, its trend, and whether it is
/// decreasing toward 0.
inline CStarDiagnostic c_star_zero_hypothesis(const MoranSpec& spec, std::int64_t k_lo,
                                              std::int64_t k_hi) {
    if (!(1 <= k_lo && k_lo <= k_hi)) throw domain_error("c_star_zero_hypothesis: bad window");
    CStarDiagnostic diag;
    CompensatedSum log_m;
    const std::int64_t mid = (k_lo + k_hi) / 2;
    std::int64_t next_sample = k_lo;
    for (std::int64_t k = 1; k <= k_hi; ++k) {
        double lvl_max, lvl_min;
        if (spec.homogeneous()) {
            UniformSegment seg = spec.uniform_segment(k);
            lvl_max = lvl_min = seg.log_ratio;
        } else {
            RatioVector rv = spec.level(k);
            lvl_max = rv.max_log_ratio();
            lvl_min = rv.min_log_ratio();
        }
        log_m.add(lvl_max);
        if (k < k_lo) continue;
        double ratio = lvl_min / log_m.value();
        if (k == k_lo) diag.ratio_start = ratio;
        if (k == mid) diag.ratio_mid = ratio;
        if (k == k_hi) diag.ratio_end = ratio;
        if (k >= next_sample || k == k_hi) {
            diag.samples.emplace_back(k, ratio);
            next_sample = std::max(next_sample + 1, static_cast<std::int64_t>(
                                                        std::ceil(static_cast<double>(k) * 1.5)));
        }
    }
    diag.decreasing = diag.ratio_end < diag.ratio_start - 1e-15;
    diag.vanishing = diag.decreasing && diag.ratio_end <= 0.6 * diag.ratio_mid;
    return diag;
}

namespace detail {

/// max_{w_lo <= k <= depth} min_{k <= m <= min(l(k,θ), depth)} s_m, streamed
/// with a monotone deque. Band minima are clamped to the depth budget, so
/// the estimate is a function of levels 1..depth only; both band endpoints
/// are non-decreasing in k, which is what the deque needs.
inline double homog_upper_sweep(const MoranSpec& spec, double theta, std::int64_t depth,
                                std::int64_t w_lo) {
    HomogeneousSums frontier(spec);
    HomogeneousSums k_sums(spec);
    std::deque<std::pair<std::int64_t, double>> q;  // (m, s_m), s increasing front to back
    double best = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 1; k <= depth; ++k) {
        k_sums.advance();
        const double target = k_sums.log_diam() / theta;
        while (frontier.level() < depth &&
               !(frontier.level() >= k && frontier.log_diam() <= target + log_tol(target))) {
            frontier.advance();
            double s = frontier.s_k();
            while (!q.empty() && q.back().second >= s) q.pop_back();
            q.emplace_back(frontier.level(), s);
        }
        while (!q.empty() && q.front().first < k) q.pop_front();
        if (k >= w_lo) best = std::max(best, q.front().second);
    }
    return best;
}

inline std::pair<double, double> homog_sk_extrema(const MoranSpec& spec, std::int64_t depth,
                                                  std::int64_t w_lo) {
    HomogeneousSums sums(spec);
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 1; k <= depth; ++k) {
        sums.advance();
        if (k < w_lo) continue;
        double s = sums.s_k();
        mn = std::min(mn, s);
        mx = std::max(mx, s);
    }
    return {mn, mx};
}

struct GeneralEstimates {
    double upper, lower;
};

/// General path: sample δ along M_k for k in the window and take the window
/// extrema of s_{δ,θ}. The paper's limits range over all δ; this subsequence
/// sampling is the declared approximation for non-homogeneous specs.
inline GeneralEstimates general_sweep(const MoranSpec& spec, double theta, std::int64_t depth,
                                      std::int64_t w_lo, std::int64_t dp_budget) {
    CompensatedSum log_m;
    double upper = -std::numeric_limits<double>::infinity();
    double lower = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 1; k <= depth; ++k) {
        log_m.add(spec.level(k).max_log_ratio());
        if (k < w_lo) continue;
        AdmissibleBand band(log_m.value(), theta);
        double s = s_delta_theta_general(spec, band, dp_budget);
        upper = std::max(upper, s);
        lower = std::min(lower, s);
    }
    return {upper, lower};
}

}  // namespace detail

/// The θ-spectrum estimate at a finite depth: per θ, upper/lower limit
/// estimates over the policy window, the same estimates at half depth, and a
/// per-θ agreement flag. θ = 0 entries report the s_* estimate directly.
inline SpectrumResult spectrum(const MoranSpec& spec, const std::vector<double>& thetas,
                               std::int64_t depth, const WindowPolicy& policy = {},
                               std::int64_t dp_budget = 5'000'000, int workers = 1) {
    if (depth < 2) throw domain_error("spectrum: depth must be >= 2");
    if (thetas.empty()) throw domain_error("spectrum: empty θ grid");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!(thetas[i] >= 0.0 && thetas[i] <= 1.0))
            throw domain_error("spectrum: θ values must lie in [0,1]");
        if (i > 0 && !(thetas[i] > thetas[i - 1]))
            throw domain_error("spectrum: θ grid must be strictly increasing");
    }

    SpectrumResult result;
    result.depth = depth;
    result.policy = policy;

    const std::int64_t half = depth / 2;
    const std::int64_t w_lo = policy.window_start(depth);
    const std::int64_t w_lo_half = policy.window_start(half);

    const bool homog = spec.homogeneous();
    double star_full = 0.0, star_half = 0.0;
    if (homog) {
        star_full = detail::homog_sk_extrema(spec, depth, w_lo).first;
        star_half = detail::homog_sk_extrema(spec, half, w_lo_half).first;
    }

    result.points.resize(thetas.size());
    auto run_theta = [&](std::size_t i) {
        const double theta = thetas[i];
        SpectrumPoint pt;
        pt.theta = theta;
        if (theta == 0.0) {
            pt.definitional = true;
            if (homog) {
                pt.upper = pt.lower = star_full;
                pt.upper_window2 = pt.lower_window2 = star_half;
            } else {
                // s_* estimate for the general path: window minimum of s_k.
                double mn = std::numeric_limits<double>::infinity(), mn_h = mn;
                for (std::int64_t k = w_lo; k <= depth; ++k) mn = std::min(mn, solve_s_kk(spec, 0, k));
                for (std::int64_t k = w_lo_half; k <= half; ++k) mn_h = std::min(mn_h, solve_s_kk(spec, 0, k));
                pt.upper = pt.lower = mn;
                pt.upper_window2 = pt.lower_window2 = mn_h;
            }
        } else if (homog) {
            pt.upper = detail::homog_upper_sweep(spec, theta, depth, w_lo);
            pt.lower = star_full;
            pt.upper_window2 = detail::homog_upper_sweep(spec, theta, half, w_lo_half);
            pt.lower_window2 = star_half;
        } else {
            auto full = detail::general_sweep(spec, theta, depth, w_lo, dp_budget);
            auto halfres = detail::general_sweep(spec, theta, half, w_lo_half, dp_budget);
            pt.upper = full.upper;
            pt.lower = full.lower;
            pt.upper_window2 = halfres.upper;
            pt.lower_window2 = halfres.lower;
        }
        pt.converged = std::abs(pt.upper - pt.upper_window2) <= policy.converge_tol &&
                       std::abs(pt.lower - pt.lower_window2) <= policy.converge_tol;
        result.points[i] = pt;
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < thetas.size(); ++i) run_theta(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t n = thetas.size();
        int w = std::min<int>(workers, static_cast<int>(n));
        pool.reserve(static_cast<std::size_t>(w));
        for (int t = 0; t < w; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t i = static_cast<std::size_t>(t); i < n; i += static_cast<std::size_t>(w))
                    run_theta(i);
            });
        for (auto& th : pool) th.join();
    }

    result.c_star = c_star_zero_hypothesis(spec, std::max<std::int64_t>(1, w_lo), depth);
    ValidationReport window_check = validate_spec(spec, std::min<std::int64_t>(depth, 4096));
    bool c_star_to_zero = !window_check.c_star_bounded_away;
    if (c_star_to_zero)
        result.label = result.c_star.vanishing
                           ? "conditional: ratios vanish; vanishing-ratio hypothesis trend holds"
                           : "unsupported: ratios vanish and the hypothesis ratio does not decay";
    return result;
}

}  // namespace moran
