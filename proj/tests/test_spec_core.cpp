#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <random>

#include "moran/moran.hpp"
#include "test_support.hpp"

using namespace moran;
using namespace test_support;

TEST_CASE("validate_spec accepts the constant Cantor rule") {
    MoranSpec spec = cantor();
    ValidationReport rep = validate_spec(spec, 100);
    CHECK(rep.valid);
    CHECK(rep.window_min_log_ratio == Catch::Approx(std::log(1.0 / 3.0)).margin(1e-14));
    CHECK(rep.c_star_bounded_away);
}

TEST_CASE("validate_spec rejects a volume-bound violation with level detail") {
    std::vector<RatioVector> levels = {RatioVector::from_ratios({0.8, 0.8})};
    MoranSpec spec(1, LevelRule::make_explicit(std::move(levels), LevelRule::Tail::repeat_last));
    ValidationReport rep = validate_spec(spec, 1);
    REQUIRE_FALSE(rep.valid);
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations.front().level == 1);
    CHECK(rep.violations.front().what.find("volume") != std::string::npos);
}

TEST_CASE("validate_spec rejects n_k < 2 and out-of-range ratios") {
    {
        std::vector<RatioVector> levels = {RatioVector::uniform(1, std::log(0.5))};
        MoranSpec spec(1, LevelRule::make_explicit(std::move(levels), LevelRule::Tail::repeat_last));
        ValidationReport rep = validate_spec(spec, 1);
        REQUIRE_FALSE(rep.valid);
        CHECK(rep.violations.front().what.find("n_k < 2") != std::string::npos);
    }
    {
        std::vector<RatioVector> levels = {RatioVector::from_log_ratios({std::log(0.4), 0.1})};
        MoranSpec spec(1, LevelRule::make_explicit(std::move(levels), LevelRule::Tail::repeat_last));
        ValidationReport rep = validate_spec(spec, 1);
        REQUIRE_FALSE(rep.valid);
        bool found = false;
        for (const auto& v : rep.violations)
            if (v.what.find("(0,1)") != std::string::npos) found = v.level == 1 && v.child == 2;
        CHECK(found);
    }
}

TEST_CASE("validate_spec flags vanishing ratios on the doubling/powers rule") {
    MoranSpec spec = preset("exm4_3");
    ValidationReport rep = validate_spec(spec, 50);
    CHECK(rep.valid);
    // window c_* = 3^-(50+1)
    CHECK(rep.window_min_log_ratio == Catch::Approx(-51.0 * kLog3).margin(1e-10));
    CHECK_FALSE(rep.c_star_bounded_away);
}

TEST_CASE("level_params matches the named rules") {
    MoranSpec e = preset("exm4_1_E");
    auto [rv5, n5] = level_params(e, 5);
    CHECK(n5 == 3);
    CHECK(rv5.max_log_ratio() == Catch::Approx(std::log(0.25)).margin(1e-15));

    MoranSpec c = cantor();
    auto [rvc, nc] = level_params(c, 1'000'000);
    CHECK(nc == 2);
    CHECK(rvc.max_log_ratio() == Catch::Approx(std::log(1.0 / 3.0)).margin(1e-15));

    MoranSpec g = preset("exm4_3");
    auto [rv4, n4] = level_params(g, 4);
    CHECK(n4 == 16);
    CHECK(rv4.max_log_ratio() == Catch::Approx(-5.0 * kLog3).margin(1e-12));

    CHECK_THROWS_AS(level_params(c, 0), domain_error);
    std::vector<RatioVector> one = {RatioVector::uniform(2, std::log(0.5))};
    MoranSpec exhausted(1, LevelRule::make_explicit(std::move(one), LevelRule::Tail::error));
    CHECK_THROWS_AS(level_params(exhausted, 2), domain_error);
}

TEST_CASE("log_diameter: root, constant ratios, per-level products") {
    MoranSpec c = cantor();
    CHECK(log_diameter(c, {}) == 0.0);
    CHECK(log_diameter(c, {1, 2, 1}) == Catch::Approx(3.0 * std::log(1.0 / 3.0)).margin(1e-14));

    MoranSpec g = preset("exm4_3");
    // first two ratios: 3^-2 and 3^-3
    CHECK(log_diameter(g, {1, 3}) == Catch::Approx(-5.0 * kLog3).margin(1e-12));

    CHECK_THROWS_AS(log_diameter(c, {1, 3}), domain_error);
    CHECK_THROWS_AS(log_diameter(c, {0}), domain_error);
}

TEST_CASE("log_diameter is additive under child extension") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 30; ++trial) {
        MoranSpec spec = trial % 2 == 0 ? random_homogeneous(rng()) : two_level_a();
        std::vector<std::int32_t> path;
        for (int depth = 0; depth < 6; ++depth) {
            RatioVector rv = spec.level(depth + 1);
            auto n = *rv.count();
            std::int32_t j = static_cast<std::int32_t>(1 + rng() % static_cast<std::uint64_t>(n));
            double before = log_diameter(spec, path);
            path.push_back(j);
            double after = log_diameter(spec, path);
            REQUIRE(after == Catch::Approx(before + rv.log_ratio(j)).margin(1e-12));
            REQUIRE(after < before);  // ratios < 1
        }
    }
}

TEST_CASE("extreme_diameters: Cantor, powers rule, non-homogeneous level") {
    MoranSpec c = cantor();
    auto [m4, cbar4] = extreme_diameters(c, 4);
    CHECK(m4 == Catch::Approx(4.0 * std::log(1.0 / 3.0)).margin(1e-14));
    CHECK(cbar4 == Catch::Approx(std::log(1.0 / 3.0)).margin(1e-15));

    MoranSpec g = preset("exm4_3");
    auto [m3, cbar3] = extreme_diameters(g, 3);
    CHECK(m3 == Catch::Approx(-(2.0 + 3.0 + 4.0) * kLog3).margin(1e-12));
    CHECK(cbar3 == Catch::Approx(-4.0 * kLog3).margin(1e-12));

    MoranSpec a = two_level_a();
    auto [m1, cbar1] = extreme_diameters(a, 1);
    CHECK(m1 == Catch::Approx(std::log(0.5)).margin(1e-15));
    CHECK(cbar1 == Catch::Approx(std::log(0.25)).margin(1e-15));
}

TEST_CASE("extreme_diameters is strictly decreasing with the defining recurrence") {
    MoranSpec spec = random_homogeneous(7);
    double prev = 0.0;
    for (std::int64_t k = 1; k <= 24; ++k) {
        auto [mk, unused] = extreme_diameters(spec, k);
        (void)unused;
        double step = spec.level(k).max_log_ratio();
        CHECK(mk == Catch::Approx(prev + step).margin(1e-12));
        CHECK(mk < prev);
        prev = mk;
    }
}

TEST_CASE("is_cut_set: full level, uncovered prefix, overlap") {
    MoranSpec c = cantor();
    std::vector<Word> full;
    for (std::int32_t a = 1; a <= 2; ++a)
        for (std::int32_t b = 1; b <= 2; ++b) full.push_back(make_word(c, {a, b}));
    CHECK(is_cut_set(c, full).ok);

    std::vector<Word> missing = {make_word(c, {1}), make_word(c, {2, 1})};
    CutSetCheck chk = is_cut_set(c, missing);
    REQUIRE_FALSE(chk.ok);
    REQUIRE(chk.uncovered_prefix.has_value());
    CHECK(*chk.uncovered_prefix == std::vector<std::int32_t>{2, 2});

    std::vector<Word> overlapping = {make_word(c, {1}), make_word(c, {2}), make_word(c, {2, 1})};
    CutSetCheck chk2 = is_cut_set(c, overlapping);
    REQUIRE_FALSE(chk2.ok);
    REQUIRE(chk2.overlap.has_value());
    CHECK(chk2.overlap->first.path == std::vector<std::int32_t>{2});
    CHECK(chk2.overlap->second.path == std::vector<std::int32_t>{2, 1});
}

TEST_CASE("full levels are cut sets; removing any word breaks coverage") {
    MoranSpec spec = two_level_a();
    for (std::int64_t depth = 1; depth <= 3; ++depth) {
        std::vector<Word> words;
        std::vector<std::int32_t> path;
        // enumerate the full level
        std::function<void(std::int64_t)> build = [&](std::int64_t level) {
            if (level == depth) {
                words.push_back(make_word(spec, path));
                return;
            }
            auto n = *spec.level(level + 1).count();
            for (std::int32_t j = 1; j <= n; ++j) {
                path.push_back(j);
                build(level + 1);
                path.pop_back();
            }
        };
        build(0);
        REQUIRE(is_cut_set(spec, words).ok);
        for (std::size_t drop = 0; drop < words.size(); ++drop) {
            std::vector<Word> reduced;
            for (std::size_t i = 0; i < words.size(); ++i)
                if (i != drop) reduced.push_back(words[i]);
            CutSetCheck chk = is_cut_set(spec, reduced);
            REQUIRE_FALSE(chk.ok);
            REQUIRE(chk.uncovered_prefix.has_value());
            CHECK(*chk.uncovered_prefix == words[drop].path);
        }
    }
}

TEST_CASE("product_spec multiplies counts and keeps the common ratio") {
    MoranSpec e = preset("exm4_1_E");
    MoranSpec f = preset("exm4_2_F");
    MoranSpec ef = product_spec(e, f);
    CHECK(ef.ambient_dim() == 2);
    CHECK(ef.homogeneous());
    for (std::int64_t k : {1, 2, 5, 10, 36, 100, 5000}) {
        UniformSegment seg = ef.uniform_segment(k);
        CHECK(seg.log_count == Catch::Approx(std::log(6.0)).margin(1e-12));
        CHECK(seg.log_ratio == Catch::Approx(std::log(0.25)).margin(1e-14));
    }

    MoranSpec cc = product_spec(cantor(), cantor());
    CHECK(cc.ambient_dim() == 2);
    auto [rv, n] = level_params(cc, 3);
    CHECK(n == 4);
    CHECK(rv.max_log_ratio() == Catch::Approx(std::log(1.0 / 3.0)).margin(1e-14));

    CHECK_THROWS_AS(product_spec(cantor(), preset("exm4_3")), domain_error);
    CHECK_THROWS_AS(product_spec(two_level_a(), two_level_a()), domain_error);
}

TEST_CASE("product of MSC specs keeps n' >= 4 and the volume bound") {
    for (auto make : {+[]() { return product_spec(cantor(), cantor()); },
                      +[]() { return product_spec(preset("exm4_1_E"), preset("exm4_2_F")); }}) {
        MoranSpec p = make();
        double d = static_cast<double>(p.ambient_dim());
        for (std::int64_t k = 1; k <= 64; ++k) {
            RatioVector rv = p.level(k);
            CHECK(rv.log_count() >= std::log(4.0) - 1e-12);
            CHECK(rv.log_sum_pow(d) <= 1e-12);
        }
    }
}
