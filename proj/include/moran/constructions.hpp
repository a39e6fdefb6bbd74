#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "moran/errors.hpp"
#include "moran/level_rule.hpp"
#include "moran/moran_spec.hpp"

namespace moran {

/// Parameters of the Möbius-spectrum family: a homogeneous construction with
/// c_k = 1/Q whose child counts alternate between N-blocks and M-blocks on
/// geometric-sum boundaries L + L^2 + ... + L^j. The upper spectrum follows
/// f(θ) = (Lθ log M + log N)/(Lθ log Q + log Q) above θ = 1/L^2 and sits on
/// the Hausdorff plateau below it.
struct MobiusFamily {
    std::int64_t L = 2;
    std::int64_t M = 3;
    std::int64_t N = 2;
    std::int64_t Q = 4;

    MobiusFamily(std::int64_t L_in, std::int64_t M_in, std::int64_t N_in, std::int64_t Q_in)
        : L(L_in), M(M_in), N(N_in), Q(Q_in) {
        if (L < 2) throw domain_error("mobius family: L must be an integer >= 2");
        if (!(2 <= N)) throw domain_error("mobius family: need N >= 2");
        if (!(N <= M)) throw domain_error("mobius family: need N <= M");
        if (!(M < Q)) throw domain_error("mobius family: need M < Q");
        verify_parameter_forms();
    }

    double log_m() const { return std::log(static_cast<double>(M)); }
    double log_n() const { return std::log(static_cast<double>(N)); }
    double log_q() const { return std::log(static_cast<double>(Q)); }

    double upper_box() const {
        double l = static_cast<double>(L);
        return (l * log_m() + log_n()) / ((l + 1.0) * log_q());
    }
    double hausdorff() const {
        double l = static_cast<double>(L);
        return (log_m() + l * log_n()) / ((l + 1.0) * log_q());
    }

private:
    // The Möbius form (Laθ+b)/(Lcθ+c) and the exponent form
    // (L log M + (1/θ) log N)/(-(L + 1/θ) log r) must coincide after the
    // substitution a = log M, b = log N, c = log Q = -log r. Checked
    // numerically at construction instead of assumed.
    void verify_parameter_forms() const {
        const double l = static_cast<double>(L);
        const double log_r = -log_q();
        for (double theta : {1.0 / (l * l), 0.5, 1.0}) {
            double mobius = (l * theta * log_m() + log_n()) / (l * theta * log_q() + log_q());
            double exponent =
                (l * log_m() + (1.0 / theta) * log_n()) / (-(l + 1.0 / theta) * log_r);
            if (std::abs(mobius - exponent) > 1e-12)
                throw domain_error("mobius family: parameter forms disagree at θ = " +
                                   std::to_string(theta));
        }
    }
};

/// Validates that reals (a, b, c) name a member of the family for a given L:
/// c > a >= b > 0 with a/b an integer (checked to 1e-9, since integrality of
/// a real ratio is not decidable numerically).
inline void validate_mobius_reals(std::int64_t L, double a, double b, double c) {
    if (L < 2) throw domain_error("mobius reals: L must be >= 2");
    if (!(b > 0.0 && a >= b && c > a))
        throw domain_error("mobius reals: need c > a >= b > 0");
    double ratio = a / b;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw domain_error("mobius reals: a/b must be a positive integer (got " +
                           std::to_string(ratio) + ")");
}

/// The block-scheduled homogeneous spec realizing the family: c_k = 1/Q,
/// n = N on odd geometric blocks (including k = 1..L) and M on even ones.
inline MoranSpec build_mobius_spec(const MobiusFamily& fam) {
    LevelRule::BlockSchedule sched;
    sched.kind = LevelRule::BoundaryKind::geometric_sum;
    sched.geometric_base = fam.L;
    const double log_c = -std::log(static_cast<double>(fam.Q));
    sched.cycle = {{fam.N, log_c}, {fam.M, log_c}};
    return MoranSpec(1, LevelRule::make_blocks(std::move(sched)));
}

/// Closed-form upper θ-spectrum of the family: the Möbius branch on
/// [1/L^2, 1] and the Hausdorff plateau on [0, 1/L^2].
inline double closed_form_spectrum(const MobiusFamily& fam, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw domain_error("closed_form_spectrum: θ must lie in [0,1]");
    const double l = static_cast<double>(fam.L);
    if (theta <= 1.0 / (l * l)) return fam.hausdorff();
    return (l * theta * fam.log_m() + fam.log_n()) / (l * theta * fam.log_q() + fam.log_q());
}

/// Example 4.4 generalization: c_k = r with real r in (0, 1/2), same block
/// schedule. Coincides with build_mobius_spec when r = 1/Q.
inline MoranSpec build_block_spec(std::int64_t L, std::int64_t M, std::int64_t N, double r) {
    if (L < 2) throw domain_error("block spec: L must be >= 2");
    if (!(r > 0.0 && r < 0.5)) throw domain_error("block spec: need r in (0, 1/2)");
    if (!(N > 1 && M > 1)) throw domain_error("block spec: need M, N > 1");
    if (!(N <= M)) throw domain_error("block spec: need N <= M");
    if (!(static_cast<double>(M) < 1.0 / r)) throw domain_error("block spec: need M < 1/r");
    LevelRule::BlockSchedule sched;
    sched.kind = LevelRule::BoundaryKind::geometric_sum;
    sched.geometric_base = L;
    sched.cycle = {{N, std::log(r)}, {M, std::log(r)}};
    return MoranSpec(1, LevelRule::make_blocks(std::move(sched)));
}

/// The alternating factorial-square construction: c_k = 1/4 with n = 3 on
/// blocks ((m!)^2, ((m+1)!)^2] for even m, n = 2 for odd m, and n_1 = 3.
/// `swapped` exchanges the 2/3 assignment (the companion construction used
/// by the product example).
inline MoranSpec build_factorial_block_spec(bool swapped) {
    LevelRule::BlockSchedule sched;
    sched.kind = LevelRule::BoundaryKind::factorial_square;
    const double log_c = -std::log(4.0);
    // Block j covers (((j-1)!)^2, (j!)^2], so odd j >= 3 carries even m in
    // the ((m!)^2, ((m+1)!)^2] indexing; cycle[0] serves odd j.
    if (!swapped) {
        sched.cycle = {{3, log_c}, {2, log_c}};
        sched.level1_n = 3;
    } else {
        sched.cycle = {{2, log_c}, {3, log_c}};
        sched.level1_n = 2;
    }
    sched.level1_log_c = log_c;
    return MoranSpec(1, LevelRule::make_blocks(std::move(sched)));
}

struct PresetParams {
    std::int64_t L = 2, M = 3, N = 2;
    double r = 0.25;
};

/// Named constructions used throughout the tests and the CLI.
inline MoranSpec preset(const std::string& name, const PresetParams& params = {}) {
    if (name == "cantor") return MoranSpec(1, LevelRule::make_constant(2, 1.0 / 3.0));
    if (name == "exm4_1_E") return build_factorial_block_spec(false);
    if (name == "exm4_2_F") return build_factorial_block_spec(true);
    if (name == "exm4_3") return MoranSpec(1, LevelRule::make_formula(LevelRule::Formula::pow2_geom3));
    if (name == "exm4_4") return build_block_spec(params.L, params.M, params.N, params.r);
    if (name == "double_exp")
        return MoranSpec(1, LevelRule::make_formula(LevelRule::Formula::double_exp));
    throw domain_error("unknown preset '" + name + "'");
}

}  // namespace moran
