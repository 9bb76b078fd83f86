#include <iostream>

#include <CLI11.hpp>

#include <antcdm/commands.hpp>

namespace {

const char* describe(const std::string& sub) {
    if (sub == "simulate") return "integrate one trajectory (or one agent run) and write trajectory.csv";
    if (sub == "sweep") return "speed-accuracy sweep over sweep.thetas for model.selector";
    if (sub == "compare") return "sweep every model in compare.models under common random numbers";
    if (sub == "fit") return "least-squares polynomial fit of the transport step, with plotting curves";
    if (sub == "agents") return "agent-based runs: ensemble-mean trajectory and per-run outcomes";
    return "mean x1 drift on an x1 grid at pinned x2";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"antcdm: house-hunting collective decision simulator"};
    app.require_subcommand(1);
    app.footer(antcdm::defaults_help());

    antcdm::Invocation inv;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out;

    for (const auto& name : antcdm::subcommands()) {
        auto* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--config,-c", config_path, "config file (flat key = value)");
        sub->add_option("--seed", seed, "master seed (overrides integrator.seed)");
        sub->add_option("--out,-o", out, "output directory (overrides output.dir)");
        sub->add_option("--jobs,-j", inv.jobs, "worker threads for trials (0 = all cores)")->capture_default_str();
        sub->add_flag("--timestamps", inv.timestamps, "record wall-clock start/end in the manifest");
        sub->add_option("overrides", inv.overrides, "config overrides, key=value");
        sub->callback([&inv, name] { inv.subcommand = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return antcdm::kExitUsage;
    }

    for (auto* sub : app.get_subcommands()) {
        if (sub->count("--config")) inv.config_path = config_path;
        if (sub->count("--seed")) inv.seed = seed;
        if (sub->count("--out")) inv.out = out;
    }
    return antcdm::run_command(inv, std::cerr);
}
