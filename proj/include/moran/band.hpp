#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "moran/classic_dims.hpp"
#include "moran/errors.hpp"
#include "moran/moran_spec.hpp"

namespace moran {

/// Relative tolerance for boundary comparisons in log space. Exact hits
/// resolve as the defining inequalities read: non-strict on the coarse side
/// (|J_u| <= δ), strict on the fine side (δ^{1/θ} < |J_{u*}|).
inline constexpr double kLogCompareTol = 1e-12;

inline double log_tol(double reference) {
    return kLogCompareTol * std::max(1.0, std::abs(reference));
}

/// The two scales constraining cut-set membership: members must satisfy
/// |J_u| <= δ and |J_{u*}| > δ^{1/θ}.
struct AdmissibleBand {
    double log_delta_cov = 0.0;   // log δ
    double log_delta_fine = 0.0;  // (1/θ) log δ
    double theta = 1.0;

    AdmissibleBand(double log_delta, double theta_in) : theta(theta_in) {
        if (!(theta > 0.0 && theta <= 1.0))
            throw domain_error("band: θ must lie in (0,1], got " + std::to_string(theta_in));
        if (!(log_delta < 0.0)) throw domain_error("band: need δ < 1 (log δ < 0)");
        log_delta_cov = log_delta;
        log_delta_fine = log_delta / theta;
    }

    bool select_allowed(double log_diam, double parent_log_diam) const {
        return log_diam <= log_delta_cov + log_tol(log_delta_cov) &&
               parent_log_diam > log_delta_fine + log_tol(log_delta_fine);
    }
    bool recurse_allowed(double log_diam) const {
        return log_diam > log_delta_fine + log_tol(log_delta_fine);
    }
};

/// l(k,θ): the unique l with c_1...c_l <= (c_1...c_k)^{1/θ} < c_1...c_{l-1}.
/// Monotone search on the prefix log sums; l >= k, and l = k at θ = 1.
inline std::int64_t l_of_k_theta(const MoranSpec& spec, std::int64_t k, double theta) {
    if (!spec.homogeneous()) throw domain_error("l_of_k_theta: spec must be homogeneous");
    if (!(theta > 0.0 && theta <= 1.0)) throw domain_error("l_of_k_theta: θ must lie in (0,1]");
    if (k < 1) throw domain_error("l_of_k_theta: k must be >= 1");
    HomogeneousSums sums(spec);
    while (sums.level() < k) sums.advance();
    const double target = sums.log_diam() / theta;
    while (!(sums.log_diam() <= target + log_tol(target))) sums.advance();
    return sums.level();
}

/// Band level indices for a scale δ: k(δ) with c_1...c_k <= δ < c_1...c_{k-1}
/// and l(δ) likewise at δ^{1/θ}. Defined for δ < c_1.
inline std::pair<std::int64_t, std::int64_t> delta_band(const MoranSpec& spec, double log_delta,
                                                        double theta) {
    if (!spec.homogeneous()) throw domain_error("delta_band: spec must be homogeneous");
    if (!(theta > 0.0 && theta <= 1.0)) throw domain_error("delta_band: θ must lie in (0,1]");
    if (!(log_delta < 0.0)) throw domain_error("delta_band: need δ < 1");
    HomogeneousSums sums(spec);
    sums.advance();
    if (log_delta > sums.log_diam() + log_tol(sums.log_diam()))
        throw domain_error("delta_band: δ >= c_1; the band is undefined at this scale");
    while (!(sums.log_diam() <= log_delta + log_tol(log_delta))) sums.advance();
    std::int64_t k = sums.level();
    const double fine = log_delta / theta;
    while (!(sums.log_diam() <= fine + log_tol(fine))) sums.advance();
    return {k, sums.level()};
}

/// s_{δ,θ} for homogeneous specs: min_{k(δ) <= m <= l(δ)} s_m, streamed off
/// the prefix sums.
inline double s_delta_theta_homog(const MoranSpec& spec, double log_delta, double theta) {
    if (!spec.homogeneous()) throw domain_error("s_delta_theta_homog: spec must be homogeneous");
    auto [k, l] = delta_band(spec, log_delta, theta);
    HomogeneousSums sums(spec);
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t m = 1; m <= l; ++m) {
        sums.advance();
        if (m >= k) best = std::min(best, sums.s_k());
    }
    return best;
}

}  // namespace moran
