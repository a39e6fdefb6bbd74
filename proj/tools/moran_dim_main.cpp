#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "moran/moran.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw moran::domain_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moran-dim: dimension spectra of Moran sets from their defining sequences"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::int64_t> depth_override;
    std::optional<std::string> thetas_override;
    std::optional<std::string> out_override;
    std::optional<int> workers_override;
    std::optional<std::uint64_t> seed_override;

    for (const char* name : {"dims", "spectrum", "verify", "construct"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--depth", depth_override, "override config depth");
        sub->add_option("--thetas", thetas_override, "override theta grid (lo:hi:step)");
        sub->add_option("--out", out_override, "override CSV output path");
        sub->add_option("--workers", workers_override, "parallel workers over theta");
        sub->add_option("--seed", seed_override, "override RNG seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : moran::exit_code::domain;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        moran::RunConfig cfg = moran::parse_config(read_file(config_path));
        if (cfg.command != command)
            moran::logging::info("config command '%s' overridden by subcommand '%s'",
                                 cfg.command.c_str(), command.c_str());
        cfg.command = command;
        if (depth_override) cfg.depth = *depth_override;
        if (thetas_override) cfg.thetas = moran::parse_theta_grid(*thetas_override);
        if (out_override) cfg.out.csv = *out_override;
        if (workers_override) cfg.workers = *workers_override;
        if (seed_override) cfg.seed = *seed_override;
        if (cfg.depth < 2) throw moran::domain_error("depth must be >= 2");
        if (cfg.workers < 1) throw moran::domain_error("workers must be >= 1");
        return moran::run_command(cfg);
    } catch (const moran::verification_error& e) {
        std::fprintf(stderr, "verification error: %s\n", e.what());
        return moran::exit_code::verification;
    } catch (const moran::resource_error& e) {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return moran::exit_code::resource;
    } catch (const moran::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return moran::exit_code::domain;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return moran::exit_code::domain;
    }
}
