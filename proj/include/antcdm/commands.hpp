#pragma once

// Subcommand implementations behind the antcdm executable. Each command reads
// an ExperimentConfig, runs, and persists its tables plus a manifest.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agents.hpp"
#include "config.hpp"
#include "polyfit.hpp"
#include "results.hpp"
#include "sde.hpp"
#include "sweep.hpp"
#include "transform.hpp"

namespace antcdm {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitRuntime = 3 };

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"simulate", "sweep", "compare", "fit", "agents", "drift"};
    return names;
}

struct Invocation {
    std::string subcommand;
    std::optional<std::string> config_path;
    std::vector<std::string> overrides; // key=value
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::size_t jobs = 1;
    bool timestamps = false;
};

namespace command_detail {

inline std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline ExperimentConfig load(const Invocation& inv) {
    std::string text;
    if (inv.config_path) {
        std::ifstream is(*inv.config_path, std::ios::binary);
        if (!is) throw IoError("cannot read config file " + *inv.config_path);
        std::ostringstream ss;
        ss << is.rdbuf();
        text = ss.str();
    }
    std::vector<KeyValue> overrides;
    for (const auto& o : inv.overrides) overrides.push_back(parse_override(o));
    if (inv.seed) overrides.push_back({"integrator.seed", std::to_string(*inv.seed), 0});
    if (inv.out) overrides.push_back({"output.dir", *inv.out, 0});
    return parse_config(text, overrides);
}

inline std::string trajectory_table(const std::vector<ColonyState>& samples, double n) {
    std::ostringstream os;
    write_trajectory_csv(os, samples, n);
    return os.str();
}

inline std::string sweep_table(const std::vector<SpeedAccuracyPoint>& points) {
    std::ostringstream os;
    os << kSweepHeader << '\n';
    for (const auto& p : points) write_sweep_row(os, p);
    return os.str();
}

inline std::string number(double v) {
    std::ostringstream os;
    write_number(os, v);
    return os.str();
}

struct Output {
    std::vector<Table> tables;
    std::vector<std::pair<std::string, std::string>> extra;
};

inline Output cmd_simulate(const ExperimentConfig& c, std::size_t, std::ostream& log) {
    Output o;
    std::vector<ColonyState> samples;
    if (c.model == ModelKind::agents) {
        ColonyRunConfig rc{c.integrator.dt, c.integrator.t_max, c.theta, c.hold_duration()};
        samples = run_colony(c.params, c.agents, rc, c.integrator.seed).series;
    } else {
        samples = simulate(c.params, c.model, c.gain_model(), c.integrator).samples;
    }
    o.tables.push_back({"trajectory.csv", trajectory_table(samples, c.params.n)});
    log << "simulate: " << samples.size() << " samples (" << to_string(c.model) << ")\n";
    return o;
}

inline Output cmd_sweep(const ExperimentConfig& c, std::size_t jobs, std::ostream& log) {
    Output o;
    if (c.thetas.empty()) {
        log << "sweep: empty threshold list, nothing to run\n";
        return o;
    }
    const auto points = speed_accuracy_sweep(c.scenario(), c.integrator, c.sweep_spec(jobs));
    o.tables.push_back({"sweep.csv", sweep_table(points)});
    log << "sweep: " << points.size() << " thresholds x " << c.trials << " trials\n";
    return o;
}

inline Output cmd_compare(const ExperimentConfig& c, std::size_t jobs, std::ostream& log) {
    Output o;
    if (c.thetas.empty()) {
        log << "compare: empty threshold list, nothing to run\n";
        return o;
    }
    std::ostringstream os;
    os << "model," << kSweepHeader << '\n';
    for (ModelKind kind : c.compare_models) {
        // same seed and stream layout for every model: common random numbers
        SweepSpec spec = c.sweep_spec(jobs);
        spec.abort_on_all_timeout = false;
        for (const auto& p : speed_accuracy_sweep(c.scenario(kind), c.integrator, spec)) {
            os << to_string(kind) << ',';
            write_sweep_row(os, p);
        }
    }
    o.tables.push_back({"compare.csv", os.str()});
    log << "compare: " << c.compare_models.size() << " models x " << c.thetas.size() << " thresholds\n";
    return o;
}

inline Output cmd_fit(const ExperimentConfig& c, std::size_t, std::ostream& log) {
    Output o;
    const StepTarget target = c.fit_target();
    const PolyFit fit = fit_step_polynomial(target, c.fit.degree, c.fit_grid());
    {
        std::ostringstream os;
        for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
            if (i) os << ',';
            write_number(os, fit.coefficients[i]);
        }
        os << '\n';
        o.tables.push_back({"fit_coefficients.csv", os.str()});
    }
    std::ostringstream os;
    os << "u,target,refit,published_fit,published_gain\n";
    for (double u : linspace(0.0, 1.0, 201)) {
        write_number(os, u);
        for (double v : {target(u), polyval(fit.coefficients, u), polyval(kPublishedFitCoefficients, u),
                         polyval(kPublishedGainCoefficients, u)}) {
            os << ',';
            write_number(os, v);
        }
        os << '\n';
    }
    o.tables.push_back({"fit_curves.csv", os.str()});
    o.extra.emplace_back("fit_rmse", number(fit.rmse));
    log << "fit: degree " << c.fit.degree << " " << to_string(c.fit.target) << " fit, rmse " << number(fit.rmse)
        << "\n";
    return o;
}

inline Output cmd_agents(const ExperimentConfig& c, std::size_t jobs, std::ostream& log) {
    Output o;
    const ColonyRunConfig rc{c.integrator.dt, c.integrator.t_max, c.theta, c.hold_duration()};
    std::vector<ColonyState> mean;
    std::vector<ColonyRun> runs;
    std::ostringstream jsonl;
    const std::size_t batch = std::max<std::size_t>(jobs, 1);
    for (std::size_t first = 0; first < c.agent_replicates; first += batch) {
        const std::size_t count = std::min(batch, c.agent_replicates - first);
        runs.assign(count, {});
        parallel_for(count, jobs, [&](std::size_t i) {
            runs[i] = run_colony(c.params, c.agents, rc, c.integrator.seed, first + i);
        });
        // accumulate in replicate order so the mean does not depend on --jobs
        for (std::size_t i = 0; i < count; ++i) {
            const auto& r = runs[i];
            if (mean.empty()) mean.assign(r.series.size(), ColonyState{});
            for (std::size_t k = 0; k < r.series.size(); ++k) {
                mean[k].t = r.series[k].t;
                mean[k].y1 += r.series[k].y1;
                mean[k].y2 += r.series[k].y2;
            }
            nlohmann::ordered_json rec;
            rec["replicate"] = first + i;
            rec["chosen"] = std::string(to_string(r.outcome.chosen));
            rec["decision_time"] = r.outcome.time;
            rec["correct"] = r.outcome.correct;
            rec["timeout"] = r.outcome.timeout;
            rec["transport_entries"] = r.counters.transport_entries;
            rec["transport_to_explore"] = r.counters.transport_to_explore;
            jsonl << rec.dump() << '\n';
        }
    }
    const double reps = static_cast<double>(c.agent_replicates);
    for (auto& s : mean) {
        s.y1 /= reps;
        s.y2 /= reps;
    }
    o.tables.push_back({"agents_trajectory.csv", trajectory_table(mean, c.params.n)});
    o.tables.push_back({"agents_outcomes.jsonl", jsonl.str()});
    log << "agents: " << c.agent_replicates << " replicates of n=" << c.params.n << "\n";
    return o;
}

inline Output cmd_drift(const ExperimentConfig& c, std::size_t, std::ostream& log) {
    Output o;
    const auto grid = linspace(c.drift.x1_min, c.drift.x1_max, c.drift.x1_points);
    const auto est = estimate_drift(c.params, c.model, c.gain_model(), c.drift.x2, grid, c.drift.replicates,
                                    c.integrator.seed);
    std::ostringstream os;
    os << "x1,x2,mean_dx1,var_dx1\n";
    for (const auto& p : est.points) {
        write_number(os, p.x1);
        os << ',';
        write_number(os, p.x2);
        os << ',';
        write_number(os, p.mean);
        os << ',';
        write_number(os, p.variance);
        os << '\n';
    }
    o.tables.push_back({"drift.csv", os.str()});
    o.extra.emplace_back("drift_constancy", number(est.constancy));
    o.extra.emplace_back("quorum_jump_ratio", number(est.quorum_jump_ratio));
    o.extra.emplace_back("infeasible_points", std::to_string(est.infeasible_x1.size()));
    if (!est.infeasible_x1.empty()) {
        log << "drift: " << est.infeasible_x1.size() << " grid points leave the simplex:";
        for (double x : est.infeasible_x1) log << ' ' << number(x);
        log << '\n';
    }
    log << "drift: constancy " << number(est.constancy) << ", quorum jump ratio " << number(est.quorum_jump_ratio)
        << "\n";
    return o;
}

} // namespace command_detail

/// Runs one subcommand; diagnostics go to `log`, returns a process exit code.
inline int run_command(const Invocation& inv, std::ostream& log) {
    using namespace command_detail;
    ExperimentConfig cfg;
    try {
        cfg = load(inv);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    try {
        const std::string started = inv.timestamps ? now_utc() : "unrecorded";
        Output out;
        const auto& s = inv.subcommand;
        if (s == "simulate") out = cmd_simulate(cfg, inv.jobs, log);
        else if (s == "sweep") out = cmd_sweep(cfg, inv.jobs, log);
        else if (s == "compare") out = cmd_compare(cfg, inv.jobs, log);
        else if (s == "fit") out = cmd_fit(cfg, inv.jobs, log);
        else if (s == "agents") out = cmd_agents(cfg, inv.jobs, log);
        else if (s == "drift") out = cmd_drift(cfg, inv.jobs, log);
        else {
            log << "error: unknown subcommand '" << s << "'\n";
            return kExitUsage;
        }
        out.tables.push_back({"config.resolved", render_config(cfg), false});
        RunManifest m;
        m.command = s;
        m.config_hash = config_hash(cfg);
        m.seed = cfg.integrator.seed;
        m.started_at = started;
        m.finished_at = inv.timestamps ? now_utc() : "unrecorded";
        m.extra = out.extra;
        const auto path = write_results(cfg.output_dir, m, out.tables);
        log << "wrote " << path.string() << '\n';
        return kExitOk;
    } catch (const DomainError& e) {
        log << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace antcdm
