#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "moran/classic_dims.hpp"
#include "moran/config.hpp"
#include "moran/errors.hpp"
#include "moran/log.hpp"
#include "moran/oracle.hpp"
#include "moran/report.hpp"
#include "moran/spectrum.hpp"

namespace moran {

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw domain_error("cannot open output file '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw domain_error("failed writing output file '" + path + "'");
}

struct VerifyReport {
    std::int64_t instances = 0;
    std::int64_t matched = 0;
    std::int64_t count_matched = 0;
    double worst_gap = 0.0;
    std::vector<std::string> mismatches;
};

/// The oracle-vs-DP battery: seeded random non-homogeneous specs and bands;
/// the DP root must match the exhaustive minimum within 1e-9 and the
/// enumeration size must match the closed-form count.
inline VerifyReport run_verification(std::uint64_t seed, std::int64_t instances,
                                     const Budgets& budgets) {
    VerifyReport rep;
    rep.instances = instances;
    RandomSpecSource source(seed);
    EnumerationBudget budget{budgets.oracle_nodes, budgets.oracle_cut_sets};
    for (std::int64_t i = 0; i < instances; ++i) {
        MoranSpec spec = source.next_spec();
        AdmissibleBand band = source.next_band(spec, budget);
        std::vector<CutSet> sets = enumerate_admissible_cut_sets(spec, band, budget);
        double expected_count = count_admissible_cut_sets(spec, band);
        bool count_ok = std::abs(expected_count - static_cast<double>(sets.size())) < 0.5;
        if (count_ok) ++rep.count_matched;

        double brute = std::numeric_limits<double>::infinity();
        for (const CutSet& cs : sets)
            brute = std::min(brute, cut_set_root(cs, static_cast<double>(spec.ambient_dim())));
        double dp = s_delta_theta_general(spec, band, budgets.dp_nodes);
        double gap = std::abs(dp - brute);
        rep.worst_gap = std::max(rep.worst_gap, gap);
        bool value_ok = gap <= 1e-9;
        if (value_ok) ++rep.matched;
        if (!value_ok || !count_ok) {
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "instance %lld: dp=%.15g brute=%.15g gap=%.3g sets=%zu expected=%.0f",
                          static_cast<long long>(i), dp, brute, gap, sets.size(), expected_count);
            rep.mismatches.push_back(buf);
        }
        logging::debug("verify instance %lld: %zu cut sets, gap %.3g",
                       static_cast<long long>(i), sets.size(), gap);
    }
    return rep;
}

namespace run_detail {

inline void print_classic_report(const MoranSpec& spec, const RunConfig& cfg) {
    const std::int64_t depth = cfg.depth;
    const std::int64_t w_lo = cfg.windows.window_start(depth);
    const std::int64_t half = depth / 2;
    const std::int64_t w_lo_half = cfg.windows.window_start(std::max<std::int64_t>(2, half));
    ClassicEstimates full = classic_dim_estimates(spec, w_lo, depth, cfg.m_list);
    ClassicEstimates prev = classic_dim_estimates(spec, w_lo_half, std::max<std::int64_t>(2, half), cfg.m_list);
    ValidationReport val = validate_spec(spec, std::min<std::int64_t>(depth, 4096));

    std::printf("window policy: %s\n", cfg.windows.describe(depth).c_str());
    std::printf("s_star_est       = %s (at k=%lld; half-depth window: %s)\n",
                format_value(full.s_star_est.value).c_str(),
                static_cast<long long>(full.s_star_est.arg_k),
                format_value(prev.s_star_est.value).c_str());
    std::printf("s_upperstar_est  = %s (at k=%lld; half-depth window: %s)\n",
                format_value(full.s_upperstar_est.value).c_str(),
                static_cast<long long>(full.s_upperstar_est.arg_k),
                format_value(prev.s_upperstar_est.value).c_str());
    bool star_conv = std::abs(full.s_star_est.value - prev.s_star_est.value) <= cfg.windows.converge_tol;
    bool upper_conv =
        std::abs(full.s_upperstar_est.value - prev.s_upperstar_est.value) <= cfg.windows.converge_tol;
    std::printf("converged: s_star %s, s_upperstar %s (threshold %s)\n", star_conv ? "yes" : "no",
                upper_conv ? "yes" : "no", format_value(cfg.windows.converge_tol).c_str());
    std::printf("packing/upper-box note: the upper box estimate also reports packing\n");
    for (auto [m, v] : full.s_doublestar_profile) {
        std::printf("s_doublestar profile m=%lld: %s", static_cast<long long>(m),
                    format_value(v).c_str());
        if (!val.c_star_bounded_away) std::printf("  [not a dimension claim: window ratios vanish]");
        std::printf("\n");
    }
    if (!val.c_star_bounded_away)
        std::printf("window ratio infimum decreases (log c_* proxy %s): c_* -> 0 regime\n",
                    format_value(val.window_min_log_ratio).c_str());
}

inline int run_spectrum(const MoranSpec& spec, const RunConfig& cfg) {
    SpectrumResult result =
        spectrum(spec, cfg.thetas, cfg.depth, cfg.windows, cfg.budgets.dp_nodes, cfg.workers);
    std::string csv = spectrum_csv(result);
    if (!cfg.out.csv.empty()) {
        write_file(cfg.out.csv, csv);
        logging::info("wrote %s", cfg.out.csv.c_str());
    } else {
        std::fputs(csv.c_str(), stdout);
    }
    if (!cfg.out.svg.empty()) {
        const MobiusFamily* overlay = cfg.mobius ? &*cfg.mobius : nullptr;
        write_file(cfg.out.svg, spectrum_svg(result, overlay));
        logging::info("wrote %s", cfg.out.svg.c_str());
    }
    if (!result.label.empty()) std::printf("label: %s\n", result.label.c_str());
    std::printf("spectrum done: depth=%lld, %zu theta points, policy %s\n",
                static_cast<long long>(cfg.depth), result.points.size(),
                cfg.windows.describe(cfg.depth).c_str());
    return exit_code::ok;
}

inline int run_construct(const RunConfig& cfg) {
    const MobiusFamily& fam = *cfg.mobius;
    MoranSpec spec = build_mobius_spec(fam);
    ValidationReport val = validate_spec(spec, 1024);
    if (!val.valid) throw domain_error("constructed mobius spec failed validation");

    json rule;
    rule["type"] = "blocks";
    rule["boundaries"] = "geometric";
    rule["L"] = fam.L;
    rule["cycle"] = json::array({json{{"n", fam.N}, {"c", 1.0 / static_cast<double>(fam.Q)}},
                                 json{{"n", fam.M}, {"c", 1.0 / static_cast<double>(fam.Q)}}});
    json doc;
    doc["ambient_dim"] = 1;
    doc["spec"] = json{{"rule", rule}};
    doc["command"] = "spectrum";
    doc["mobius"] = json{{"L", fam.L}, {"M", fam.M}, {"N", fam.N}, {"Q", fam.Q}};
    std::string spec_text = doc.dump(2) + "\n";
    if (!cfg.out.spec.empty())
        write_file(cfg.out.spec, spec_text);
    else
        std::fputs(spec_text.c_str(), stdout);

    std::string table = "theta,closed_form\n";
    for (double theta : cfg.thetas)
        table += format_value(theta) + "," + format_value(closed_form_spectrum(fam, theta)) + "\n";
    if (!cfg.out.csv.empty())
        write_file(cfg.out.csv, table);
    else
        std::fputs(table.c_str(), stdout);
    std::printf("construct done: L=%lld M=%lld N=%lld Q=%lld, hdd=%s ubd=%s\n",
                static_cast<long long>(fam.L), static_cast<long long>(fam.M),
                static_cast<long long>(fam.N), static_cast<long long>(fam.Q),
                format_value(fam.hausdorff()).c_str(), format_value(fam.upper_box()).c_str());
    return exit_code::ok;
}

}  // namespace run_detail

/// Dispatches a parsed run configuration. Throws moran errors; the CLI maps
/// them to exit codes (domain 1, resource 2, verification 3).
inline int run_command(const RunConfig& cfg) {
    if (cfg.command == "dims") {
        const MoranSpec& spec = *cfg.spec;
        ValidationReport val = validate_spec(spec, std::min<std::int64_t>(cfg.depth, 4096));
        if (!val.valid) {
            std::string what = "spec validation failed:";
            for (const auto& v : val.violations) {
                what += " [level " + std::to_string(v.level);
                if (v.child > 0) what += " child " + std::to_string(v.child);
                what += ": " + v.what + "]";
                if (what.size() > 400) break;
            }
            throw domain_error(what);
        }
        run_detail::print_classic_report(spec, cfg);
        return exit_code::ok;
    }
    if (cfg.command == "spectrum") return run_detail::run_spectrum(*cfg.spec, cfg);
    if (cfg.command == "verify") {
        VerifyReport rep = run_verification(cfg.seed, cfg.instances, cfg.budgets);
        std::printf("verify: seed=%llu instances=%lld\n", static_cast<unsigned long long>(cfg.seed),
                    static_cast<long long>(rep.instances));
        std::printf("root agreement: %lld/%lld matched <= 1e-9 (worst gap %.3g)\n",
                    static_cast<long long>(rep.matched), static_cast<long long>(rep.instances),
                    rep.worst_gap);
        std::printf("count agreement: %lld/%lld matched the closed-form recursion\n",
                    static_cast<long long>(rep.count_matched), static_cast<long long>(rep.instances));
        for (const std::string& m : rep.mismatches) std::printf("MISMATCH %s\n", m.c_str());
        if (rep.matched != rep.instances || rep.count_matched != rep.instances)
            throw verification_error("oracle-vs-DP verification found mismatches");
        return exit_code::ok;
    }
    if (cfg.command == "construct") return run_detail::run_construct(cfg);
    throw domain_error("unknown command '" + cfg.command + "'");
}

}  // namespace moran
