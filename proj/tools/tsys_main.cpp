#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsys/commands.hpp"

namespace {

tsys::Sense parse_sense(const std::string& s) {
    return s == "min" ? tsys::Sense::Min : tsys::Sense::Max;
}

int emit(const tsys::CommandResult& res) {
    std::fputs(res.output.c_str(), stdout);
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tchebycheff-system moment bounds: verification, grid-LP oracle, "
                 "and extremal-measure solver"};
    app.require_subcommand(1);

    std::string spec_path;
    tsys::GlobalFlags flags;
    std::uint64_t seed_value = 0;
    double tol_value = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec_path, "problem spec file (JSON)")->required();
        cmd->add_flag("--json", flags.json, "emit a JSON report");
        cmd->add_option("--seed", seed_value, "sampling seed (falls back to TSYS_SEED)")
            ->each([&](const std::string& s) { flags.seed = std::stoull(s); });
        cmd->add_option("--tol", tol_value, "sign-tolerance factor override")
            ->each([&](const std::string& s) { flags.tol = std::stod(s); });
        cmd->add_flag("--override", flags.override_hypothesis,
                      "proceed despite a refuted sampling hypothesis");
    };

    CLI::App* verify = app.add_subcommand("verify", "T+/M+ ladder, Wronskian criterion, "
                                                    "positivity certificate");
    add_common(verify);

    std::string sense_str = "max";
    CLI::App* bound = app.add_subcommand("bound", "sharp moment bound for one sense");
    add_common(bound);
    bound->add_option("--sense", sense_str, "max or min")
        ->required()
        ->check(CLI::IsMember({"max", "min"}));

    std::string oracle_sense_str = "max";
    std::vector<int> grids = {1025, 4097, 16385};
    CLI::App* oracle = app.add_subcommand("oracle", "grid-LP ladder report");
    add_common(oracle);
    oracle->add_option("--sense", oracle_sense_str, "max or min (default max)")
        ->check(CLI::IsMember({"max", "min"}));
    oracle->add_option("--grids", grids, "comma-separated grid sizes")->delimiter(',');

    std::string alt_objective;
    CLI::App* compare = app.add_subcommand("compare", "objective-independence check");
    add_common(compare);
    compare->add_option("--alt", alt_objective, "alternative objective expression")->required();

    CLI11_PARSE(app, argc, argv);

    if (!flags.seed) {
        if (const char* env = std::getenv("TSYS_SEED")) {
            std::uint64_t v = 0;
            auto res = std::from_chars(env, env + std::strlen(env), v);
            if (res.ec == std::errc() && *res.ptr == '\0') flags.seed = v;
        }
    }

    tsys::ProblemSpec spec;
    try {
        spec = tsys::load_spec(spec_path);
    } catch (const tsys::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return tsys::kExitUsage;
    }

    if (verify->parsed()) return emit(tsys::cmd_verify(spec, flags));
    if (bound->parsed()) return emit(tsys::cmd_bound(spec, parse_sense(sense_str), flags));
    if (oracle->parsed()) {
        return emit(tsys::cmd_oracle(spec, parse_sense(oracle_sense_str), grids, flags));
    }
    if (compare->parsed()) return emit(tsys::cmd_compare(spec, alt_objective, flags));
    return tsys::kExitUsage;
}
