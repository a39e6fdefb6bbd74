#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "moran/moran.hpp"
#include "test_support.hpp"

using namespace moran;
using namespace test_support;

TEST_CASE("l_of_k_theta: constant ratios give the ceiling rule") {
    MoranSpec c = cantor();
    CHECK(l_of_k_theta(c, 100, 1.0 / 3.0) == 300);
    CHECK(l_of_k_theta(c, 100, 1.0) == 100);
    CHECK(l_of_k_theta(c, 2, 0.4) == 5);   // ceil(2 / 0.4) = 5, exact hit
    CHECK(l_of_k_theta(c, 3, 0.7) == 5);   // ceil(3 / 0.7) = ceil(4.29)

    MoranSpec e = preset("exm4_1_E");  // constant ratio 1/4
    CHECK(l_of_k_theta(e, 100, 1.0 / 3.0) == 300);
}

TEST_CASE("l_of_k_theta on the powers rule via explicit prefix sums") {
    MoranSpec g = preset("exm4_3");
    // prefix exponents 2,3,4,...: need first l with sum >= 2 * 9 = 18 -> l = 5
    CHECK(l_of_k_theta(g, 3, 0.5) == 5);
    CHECK(l_of_k_theta(g, 3, 1.0) == 3);
}

TEST_CASE("l_of_k_theta is monotone in k and anti-monotone in theta") {
    MoranSpec spec = random_homogeneous(3);
    std::int64_t prev = 1;
    for (std::int64_t k = 1; k <= 60; ++k) {
        std::int64_t l = l_of_k_theta(spec, k, 0.37);
        REQUIRE(l >= k);
        REQUIRE(l >= prev);
        prev = l;
    }
    for (std::int64_t k : {5, 17, 40}) {
        std::int64_t l_small = l_of_k_theta(spec, k, 0.3);
        std::int64_t l_big = l_of_k_theta(spec, k, 0.9);
        REQUIRE(l_small >= l_big);
    }
}

TEST_CASE("delta_band: exact and off-grid scales") {
    MoranSpec c = cantor();
    auto [k1, l1] = delta_band(c, -5.0 * kLog3, 0.5);
    CHECK(k1 == 5);
    CHECK(l1 == 10);
    auto [k2, l2] = delta_band(c, -4.5 * kLog3, 0.5);
    CHECK(k2 == 5);
    CHECK(l2 == 9);

    MoranSpec e = preset("exm4_1_E");
    auto [k3, l3] = delta_band(e, -7.0 * kLog4, 0.25);
    CHECK(k3 == 7);
    CHECK(l3 == 28);

    CHECK_THROWS_AS(delta_band(c, std::log(0.5), 0.5), domain_error);  // δ > c_1
}

TEST_CASE("s_delta_theta_homog takes the band minimum") {
    MoranSpec c = cantor();
    CHECK(s_delta_theta_homog(c, -4.0 * kLog3, 0.5) == Catch::Approx(kLog2 / kLog3).margin(1e-13));
    CHECK(s_delta_theta_homog(c, -2.5 * kLog3, 0.9) == Catch::Approx(kLog2 / kLog3).margin(1e-13));

    // powers rule: δ at the level-3 diameter, θ = 1/2 -> band [3,5]; s_m is
    // increasing so the minimum is s_3 = 4 log2 / (6 log3).
    MoranSpec g = preset("exm4_3");
    double log_delta = -(2.0 + 3.0 + 4.0) * kLog3;
    CHECK(s_delta_theta_homog(g, log_delta, 0.5) ==
          Catch::Approx(4.0 * kLog2 / (6.0 * kLog3)).margin(1e-12));

    // θ = 1 collapses the band to one level.
    MoranSpec e = preset("exm4_1_E");
    CHECK(s_delta_theta_homog(e, -36.0 * kLog4, 1.0) ==
          Catch::Approx(s_k_homogeneous(e, 36)).margin(1e-13));
}

TEST_CASE("band membership: s_delta_theta stays within the band extrema") {
    MoranSpec spec = random_homogeneous(11);
    HomogeneousSums sums(spec);
    for (int i = 0; i < 40; ++i) sums.advance();
    for (double theta : {0.3, 0.6, 1.0}) {
        for (std::int64_t k : {4, 9, 15}) {
            double log_delta = 0.0;
            {
                HomogeneousSums probe(spec);
                while (probe.level() < k) probe.advance();
                log_delta = probe.log_diam() * 1.0001;  // just off the exact level scale
            }
            auto [bk, bl] = delta_band(spec, log_delta, theta);
            double value = s_delta_theta_homog(spec, log_delta, theta);
            double mn = 1e300, mx = -1e300;
            HomogeneousSums walk(spec);
            for (std::int64_t m = 1; m <= bl; ++m) {
                walk.advance();
                if (m >= bk) {
                    mn = std::min(mn, walk.s_k());
                    mx = std::max(mx, walk.s_k());
                }
            }
            REQUIRE(value >= mn - 1e-12);
            REQUIRE(value <= mx + 1e-12);
        }
    }
}

TEST_CASE("c_star hypothesis diagnostic: powers rule decays, Cantor is 1/k") {
    MoranSpec g = preset("exm4_3");
    CStarDiagnostic diag = c_star_zero_hypothesis(g, 10, 1000);
    // closed form 2(k+1)/(k(k+3))
    auto expected = [](double k) { return 2.0 * (k + 1.0) / (k * (k + 3.0)); };
    CHECK(diag.ratio_start == Catch::Approx(expected(10)).margin(1e-12));
    CHECK(diag.ratio_end == Catch::Approx(expected(1000)).margin(1e-12));
    CHECK(diag.ratio_end < 0.01);
    CHECK(diag.decreasing);
    CHECK(diag.vanishing);

    CStarDiagnostic cd = c_star_zero_hypothesis(cantor(), 10, 1000);
    CHECK(cd.ratio_end == Catch::Approx(1.0 / 1000.0).margin(1e-12));
    CHECK(cd.vanishing);

    // c_k = 2^-(2^k): the ratio tends to 1/2, so the hypothesis fails.
    MoranSpec de = preset("double_exp");
    CStarDiagnostic dd = c_star_zero_hypothesis(de, 10, 60);
    CHECK(dd.ratio_end == Catch::Approx(0.5).margin(1e-6));
    CHECK_FALSE(dd.vanishing);
}

TEST_CASE("spectrum: constant on Cantor at every theta") {
    WindowPolicy policy;
    SpectrumResult res = spectrum(cantor(), parse_theta_grid("0:1:0.25"), 1000, policy);
    const double sim = kLog2 / kLog3;
    REQUIRE(res.points.size() == 5);
    for (const SpectrumPoint& pt : res.points) {
        CHECK(pt.upper == Catch::Approx(sim).margin(1e-12));
        CHECK(pt.lower == Catch::Approx(sim).margin(1e-12));
        CHECK(pt.converged);
    }
    CHECK(res.label.empty());
}

TEST_CASE("spectrum invariants: sandwich, theta-monotonicity, theta=1 consistency") {
    WindowPolicy policy;
    policy.scale = WindowPolicy::Scale::log;
    struct Case {
        MoranSpec spec;
        std::int64_t depth;
    };
    std::vector<Case> cases;
    cases.push_back({preset("exm4_3"), 2000});
    cases.push_back({preset("exm4_1_E"), 14400});
    cases.push_back({build_mobius_spec(MobiusFamily(2, 3, 2, 4)), 1 << 14});
    cases.push_back({random_homogeneous(23), 3000});
    for (const Case& c : cases) {
        std::vector<double> grid = parse_theta_grid("0:1:0.1");
        SpectrumResult res = spectrum(c.spec, grid, c.depth, policy);
        std::int64_t w_lo = policy.window_start(c.depth);
        ClassicEstimates est = classic_dim_estimates(c.spec, w_lo, c.depth);
        double prev_upper = -1e300, prev_lower = -1e300;
        for (const SpectrumPoint& pt : res.points) {
            REQUIRE(pt.lower >= est.s_star_est.value - 1e-12);
            REQUIRE(pt.upper <= est.s_upperstar_est.value + 1e-12);
            REQUIRE(pt.lower <= pt.upper + 1e-12);
            REQUIRE(pt.upper >= prev_upper - 1e-12);
            REQUIRE(pt.lower >= prev_lower - 1e-12);
            REQUIRE(pt.upper <= static_cast<double>(c.spec.ambient_dim()));
            REQUIRE(pt.lower >= 0.0);
            prev_upper = pt.upper;
            prev_lower = pt.lower;
        }
        // θ = 1 recovers the classic window extrema exactly.
        const SpectrumPoint& last = res.points.back();
        REQUIRE(last.theta == 1.0);
        REQUIRE(last.upper == Catch::Approx(est.s_upperstar_est.value).margin(1e-12));
        REQUIRE(last.lower == Catch::Approx(est.s_star_est.value).margin(1e-12));
        // θ = 0 is the definitional s_* row.
        REQUIRE(res.points.front().definitional);
        REQUIRE(res.points.front().upper == Catch::Approx(est.s_star_est.value).margin(1e-12));
    }
}

TEST_CASE("spectrum matches the closed form on a small Mobius run") {
    MobiusFamily fam(2, 3, 2, 4);
    MoranSpec spec = build_mobius_spec(fam);
    WindowPolicy policy;
    policy.scale = WindowPolicy::Scale::log;
    std::vector<double> grid = {0.3, 0.5, 1.0};
    SpectrumResult res = spectrum(spec, grid, std::int64_t{1} << 20, policy);
    for (const SpectrumPoint& pt : res.points) {
        double expected = closed_form_spectrum(fam, pt.theta);
        CHECK(pt.upper == Catch::Approx(expected).margin(0.01));
    }
}

TEST_CASE("spectrum labels the vanishing-ratio regimes") {
    WindowPolicy policy;
    SpectrumResult good = spectrum(preset("exm4_3"), {0.5, 1.0}, 2000, policy);
    CHECK(good.label.find("conditional") == 0);
    SpectrumResult bad = spectrum(preset("double_exp"), {0.5, 1.0}, 64, policy);
    CHECK(bad.label.find("unsupported") == 0);
}

TEST_CASE("spectrum is worker-count independent") {
    MoranSpec spec = preset("exm4_3");
    std::vector<double> grid = parse_theta_grid("0:1:0.2");
    SpectrumResult a = spectrum(spec, grid, 4000, WindowPolicy{}, 5'000'000, 1);
    SpectrumResult b = spectrum(spec, grid, 4000, WindowPolicy{}, 5'000'000, 8);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        REQUIRE(a.points[i].upper == b.points[i].upper);
        REQUIRE(a.points[i].lower == b.points[i].lower);
        REQUIRE(a.points[i].upper_window2 == b.points[i].upper_window2);
        REQUIRE(a.points[i].converged == b.points[i].converged);
    }
}

TEST_CASE("general-path spectrum works on a shallow non-homogeneous spec") {
    MoranSpec spec = two_level_b();
    WindowPolicy policy;
    policy.tail_fraction = 0.5;
    std::vector<double> grid = {0.6, 0.8, 1.0};
    SpectrumResult res = spectrum(spec, grid, 8, policy, 2'000'000);
    double prev = -1e300;
    for (const SpectrumPoint& pt : res.points) {
        REQUIRE(pt.lower <= pt.upper + 1e-12);
        REQUIRE(pt.upper >= prev - 1e-9);
        prev = pt.upper;
        REQUIRE(pt.upper <= 1.0);
        REQUIRE(pt.lower >= 0.0);
    }
}

TEST_CASE("general-path spectrum refuses when the node budget is exceeded") {
    MoranSpec spec = two_level_b();
    CHECK_THROWS_AS(spectrum(spec, {0.5, 1.0}, 64, WindowPolicy{}, 10'000), resource_error);
}
