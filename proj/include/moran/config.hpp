#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moran/constructions.hpp"
#include "moran/errors.hpp"
#include "moran/level_rule.hpp"
#include "moran/moran_spec.hpp"
#include "moran/spectrum.hpp"

namespace moran {

using json = nlohmann::json;

/// "lo:hi:step" -> strictly increasing grid including both endpoints.
inline std::vector<double> parse_theta_grid(const std::string& text) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(text);
    in >> lo >> colon1 >> hi >> colon2 >> step;
    if (!in || colon1 != ':' || colon2 != ':' || !(in >> std::ws).eof())
        throw domain_error("theta grid '" + text + "' is not of the form lo:hi:step");
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) throw domain_error("theta grid endpoints must satisfy 0 <= lo <= hi <= 1");
    if (!(step > 0.0)) throw domain_error("theta grid step must be positive");
    std::vector<double> grid;
    for (std::int64_t i = 0;; ++i) {
        double v = lo + static_cast<double>(i) * step;
        if (v > hi + 1e-9) break;
        grid.push_back(std::min(v, hi));
    }
    if (grid.empty() || std::abs(grid.back() - hi) > 1e-9) grid.push_back(hi);
    grid.back() = hi;
    return grid;
}

struct Budgets {
    std::int64_t dp_nodes = 5'000'000;
    std::int64_t oracle_nodes = 200'000;
    std::int64_t oracle_cut_sets = 200'000;
};

struct OutputPaths {
    std::string csv;
    std::string svg;
    std::string spec;
};

struct RunConfig {
    std::string command;
    int ambient_dim = 1;
    std::optional<MoranSpec> spec;
    std::optional<MobiusFamily> mobius;  // construct input / overlay source
    std::vector<double> thetas;
    std::int64_t depth = 10'000;
    WindowPolicy windows;
    Budgets budgets;
    double tol = 1e-12;
    std::uint64_t seed = 42;
    std::int64_t instances = 100;
    std::vector<std::int64_t> m_list = {1, 2, 4, 8};
    int workers = 1;
    OutputPaths out;
};

namespace config_detail {

inline void require_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw domain_error("config field " + path + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw domain_error("config field " + path + ": unknown key '" + it.key() + "'");
    }
}

inline RatioVector parse_level(const json& j, const std::string& path) {
    require_keys(j, path, {"n", "c", "ratios"});
    if (j.contains("ratios")) {
        if (j.contains("n") || j.contains("c"))
            throw domain_error("config field " + path + ": give either ratios or (n, c)");
        std::vector<double> ratios = j.at("ratios").get<std::vector<double>>();
        return RatioVector::from_ratios(ratios);
    }
    if (!j.contains("n") || !j.contains("c"))
        throw domain_error("config field " + path + ": need n and c");
    std::int64_t n = j.at("n").get<std::int64_t>();
    double c = j.at("c").get<double>();
    if (!(c > 0.0 && c < 1.0)) throw domain_error("config field " + path + ".c: ratio must lie in (0,1)");
    return RatioVector::uniform(n, std::log(c));
}

inline LevelRule parse_rule(const json& j, const std::string& path) {
    require_keys(j, path, {"type", "levels", "tail", "boundaries", "L", "cycle", "level1", "name"});
    std::string type = j.at("type").get<std::string>();
    if (type == "explicit" || type == "periodic") {
        std::vector<RatioVector> levels;
        const json& arr = j.at("levels");
        if (!arr.is_array() || arr.empty())
            throw domain_error("config field " + path + ".levels: need a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            levels.push_back(parse_level(arr[i], path + ".levels[" + std::to_string(i) + "]"));
        if (type == "periodic") return LevelRule::make_periodic(std::move(levels));
        LevelRule::Tail tail = LevelRule::Tail::error;
        if (j.contains("tail")) {
            std::string t = j.at("tail").get<std::string>();
            if (t == "repeat_last")
                tail = LevelRule::Tail::repeat_last;
            else if (t != "error")
                throw domain_error("config field " + path + ".tail: expected 'error' or 'repeat_last'");
        }
        return LevelRule::make_explicit(std::move(levels), tail);
    }
    if (type == "blocks") {
        LevelRule::BlockSchedule sched;
        std::string b = j.at("boundaries").get<std::string>();
        if (b == "factorial_square") {
            sched.kind = LevelRule::BoundaryKind::factorial_square;
        } else if (b == "geometric") {
            sched.kind = LevelRule::BoundaryKind::geometric_sum;
            sched.geometric_base = j.at("L").get<std::int64_t>();
        } else {
            throw domain_error("config field " + path + ".boundaries: expected 'factorial_square' or 'geometric'");
        }
        for (const json& entry : j.at("cycle")) {
            require_keys(entry, path + ".cycle[]", {"n", "c"});
            double c = entry.at("c").get<double>();
            if (!(c > 0.0 && c < 1.0)) throw domain_error("config field " + path + ".cycle: ratio must lie in (0,1)");
            sched.cycle.emplace_back(entry.at("n").get<std::int64_t>(), std::log(c));
        }
        if (j.contains("level1")) {
            require_keys(j.at("level1"), path + ".level1", {"n", "c"});
            sched.level1_n = j.at("level1").at("n").get<std::int64_t>();
            double c = j.at("level1").at("c").get<double>();
            if (!(c > 0.0 && c < 1.0)) throw domain_error("config field " + path + ".level1.c: ratio must lie in (0,1)");
            sched.level1_log_c = std::log(c);
        }
        return LevelRule::make_blocks(std::move(sched));
    }
    if (type == "formula") {
        std::string name = j.at("name").get<std::string>();
        if (name == "exm4_3") return LevelRule::make_formula(LevelRule::Formula::pow2_geom3);
        if (name == "double_exp") return LevelRule::make_formula(LevelRule::Formula::double_exp);
        throw domain_error("config field " + path + ".name: unknown formula '" + name + "'");
    }
    throw domain_error("config field " + path + ".type: unknown rule type '" + type + "'");
}

inline MoranSpec parse_spec(const json& j, int ambient_dim, const std::string& path,
                            std::optional<MobiusFamily>& mobius_out) {
    require_keys(j, path, {"preset", "params", "rule"});
    if (j.contains("preset")) {
        std::string name = j.at("preset").get<std::string>();
        PresetParams params;
        if (j.contains("params")) {
            const json& p = j.at("params");
            require_keys(p, path + ".params", {"L", "M", "N", "r"});
            if (p.contains("L")) params.L = p.at("L").get<std::int64_t>();
            if (p.contains("M")) params.M = p.at("M").get<std::int64_t>();
            if (p.contains("N")) params.N = p.at("N").get<std::int64_t>();
            if (p.contains("r")) params.r = p.at("r").get<double>();
        }
        if (name == "exm4_4") {
            double q = 1.0 / params.r;
            if (std::abs(q - std::round(q)) < 1e-9 && std::round(q) > params.M)
                mobius_out = MobiusFamily(params.L, params.M, params.N,
                                          static_cast<std::int64_t>(std::round(q)));
        }
        return preset(name, params);
    }
    if (j.contains("rule")) return MoranSpec(ambient_dim, parse_rule(j.at("rule"), path + ".rule"));
    throw domain_error("config field " + path + ": need a preset or a rule");
}

}  // namespace config_detail

/// Parses and fully validates a run configuration. Unknown keys anywhere in
/// the document are rejected.
inline RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw domain_error(std::string("config parse error: ") + e.what());
    }
    config_detail::require_keys(doc, "<root>",
                                {"ambient_dim", "spec", "command", "thetas", "depth", "windows",
                                 "budgets", "tol", "seed", "instances", "m_list", "mobius",
                                 "workers", "out"});
    RunConfig cfg;
    try {
        if (doc.contains("ambient_dim")) cfg.ambient_dim = doc.at("ambient_dim").get<int>();
        if (cfg.ambient_dim < 1) throw domain_error("config field ambient_dim: must be >= 1");
        cfg.command = doc.at("command").get<std::string>();
        if (cfg.command != "dims" && cfg.command != "spectrum" && cfg.command != "verify" &&
            cfg.command != "construct")
            throw domain_error("config field command: unknown command '" + cfg.command + "'");
        if (doc.contains("thetas")) {
            if (doc.at("thetas").is_string())
                cfg.thetas = parse_theta_grid(doc.at("thetas").get<std::string>());
            else
                cfg.thetas = doc.at("thetas").get<std::vector<double>>();
        } else {
            cfg.thetas = parse_theta_grid("0:1:0.05");
        }
        for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
            if (!(cfg.thetas[i] >= 0.0 && cfg.thetas[i] <= 1.0))
                throw domain_error("config field thetas: values must lie in [0,1]");
            if (i > 0 && !(cfg.thetas[i] > cfg.thetas[i - 1]))
                throw domain_error("config field thetas: grid must be strictly increasing");
        }
        if (doc.contains("depth")) cfg.depth = doc.at("depth").get<std::int64_t>();
        if (cfg.depth < 2) throw domain_error("config field depth: must be >= 2");
        if (doc.contains("windows")) {
            const json& w = doc.at("windows");
            config_detail::require_keys(w, "windows", {"tail_fraction", "scale", "converge_tol"});
            if (w.contains("tail_fraction")) cfg.windows.tail_fraction = w.at("tail_fraction").get<double>();
            if (!(cfg.windows.tail_fraction > 0.0 && cfg.windows.tail_fraction <= 1.0))
                throw domain_error("config field windows.tail_fraction: must lie in (0,1]");
            if (w.contains("scale")) {
                std::string s = w.at("scale").get<std::string>();
                if (s == "linear")
                    cfg.windows.scale = WindowPolicy::Scale::linear;
                else if (s == "log")
                    cfg.windows.scale = WindowPolicy::Scale::log;
                else
                    throw domain_error("config field windows.scale: expected 'linear' or 'log'");
            }
            if (w.contains("converge_tol")) cfg.windows.converge_tol = w.at("converge_tol").get<double>();
        }
        if (doc.contains("budgets")) {
            const json& b = doc.at("budgets");
            config_detail::require_keys(b, "budgets", {"dp_nodes", "oracle_nodes", "oracle_cut_sets"});
            if (b.contains("dp_nodes")) cfg.budgets.dp_nodes = b.at("dp_nodes").get<std::int64_t>();
            if (b.contains("oracle_nodes")) cfg.budgets.oracle_nodes = b.at("oracle_nodes").get<std::int64_t>();
            if (b.contains("oracle_cut_sets"))
                cfg.budgets.oracle_cut_sets = b.at("oracle_cut_sets").get<std::int64_t>();
        }
        if (doc.contains("tol")) cfg.tol = doc.at("tol").get<double>();
        if (!(cfg.tol > 0.0)) throw domain_error("config field tol: must be positive");
        if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("instances")) cfg.instances = doc.at("instances").get<std::int64_t>();
        if (doc.contains("m_list")) cfg.m_list = doc.at("m_list").get<std::vector<std::int64_t>>();
        if (doc.contains("workers")) cfg.workers = doc.at("workers").get<int>();
        if (cfg.workers < 1) throw domain_error("config field workers: must be >= 1");
        if (doc.contains("mobius")) {
            const json& m = doc.at("mobius");
            config_detail::require_keys(m, "mobius", {"L", "M", "N", "Q"});
            cfg.mobius = MobiusFamily(m.at("L").get<std::int64_t>(), m.at("M").get<std::int64_t>(),
                                      m.at("N").get<std::int64_t>(), m.at("Q").get<std::int64_t>());
        }
        if (doc.contains("out")) {
            const json& o = doc.at("out");
            config_detail::require_keys(o, "out", {"csv", "svg", "spec"});
            if (o.contains("csv")) cfg.out.csv = o.at("csv").get<std::string>();
            if (o.contains("svg")) cfg.out.svg = o.at("svg").get<std::string>();
            if (o.contains("spec")) cfg.out.spec = o.at("spec").get<std::string>();
        }
        if (doc.contains("spec"))
            cfg.spec = config_detail::parse_spec(doc.at("spec"), cfg.ambient_dim, "spec", cfg.mobius);
        if (cfg.command != "construct" && cfg.command != "verify" && !cfg.spec)
            throw domain_error("config: command '" + cfg.command + "' needs a spec");
        if (cfg.command == "construct" && !cfg.mobius)
            throw domain_error("config: construct needs a mobius block");
    } catch (const json::exception& e) {
        throw domain_error(std::string("config semantic error: ") + e.what());
    }
    return cfg;
}

}  // namespace moran
