#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "moran/moran.hpp"

namespace test_support {

inline constexpr double kLog2 = 0.6931471805599453;
inline constexpr double kLog3 = 1.0986122886681098;
inline constexpr double kLog4 = 1.3862943611198906;

inline moran::MoranSpec cantor() { return moran::preset("cantor"); }

/// φ_1 = (1/2, 1/4), φ_2 = (1/3, 1/3), then level 2 repeats.
inline moran::MoranSpec two_level_a() {
    std::vector<moran::RatioVector> levels = {
        moran::RatioVector::from_ratios({0.5, 0.25}),
        moran::RatioVector::from_ratios({1.0 / 3.0, 1.0 / 3.0}),
    };
    return moran::MoranSpec(1, moran::LevelRule::make_explicit(std::move(levels),
                                                               moran::LevelRule::Tail::repeat_last));
}

/// φ_1 = (1/2, 1/4), φ_2 = (1/2, 1/2) with repeat tail.
inline moran::MoranSpec two_level_b() {
    std::vector<moran::RatioVector> levels = {
        moran::RatioVector::from_ratios({0.5, 0.25}),
        moran::RatioVector::from_ratios({0.5, 0.5}),
    };
    return moran::MoranSpec(1, moran::LevelRule::make_explicit(std::move(levels),
                                                               moran::LevelRule::Tail::repeat_last));
}

/// Deterministic homogeneous spec: periodic uniform levels drawn from a
/// fixed palette.
inline moran::MoranSpec random_homogeneous(std::uint64_t seed, int period_len = 7) {
    std::mt19937_64 rng(seed);
    static const double palette[] = {0.2, 0.25, 1.0 / 3.0, 0.4, 0.45};
    std::vector<moran::RatioVector> period;
    for (int i = 0; i < period_len; ++i) {
        std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 2);
        double c;
        do {
            c = palette[rng() % 5];
        } while (static_cast<double>(n) * c > 1.0);
        period.push_back(moran::RatioVector::uniform(n, std::log(c)));
    }
    return moran::MoranSpec(1, moran::LevelRule::make_periodic(std::move(period)));
}

/// Count of 3-levels of the alternating factorial construction up to level k,
/// computed directly from the (m!)^2 boundaries: n_1 = 3, then 3 on
/// ((m!)^2, ((m+1)!)^2] for even m and 2 for odd m. Independent of the
/// level-rule implementation.
inline std::int64_t factorial_threes_up_to(std::int64_t k) {
    std::int64_t threes = k >= 1 ? 1 : 0;
    std::int64_t fact = 1;
    for (std::int64_t m = 1;; ++m) {
        fact *= m;
        std::int64_t lo = fact * fact;           // (m!)^2
        std::int64_t hi = lo * (m + 1) * (m + 1);  // ((m+1)!)^2
        if (lo >= k) break;
        std::int64_t covered = std::min(hi, k) - lo;
        if (m % 2 == 0) threes += covered;
        if (hi >= k) break;
    }
    return threes;
}

/// s_k of the alternating factorial construction from the block counts.
inline double factorial_sk(std::int64_t k) {
    std::int64_t threes = factorial_threes_up_to(k);
    std::int64_t twos = k - threes;
    return (static_cast<double>(threes) * kLog3 + static_cast<double>(twos) * kLog2) /
           (static_cast<double>(k) * kLog4);
}

}  // namespace test_support
