#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "agents.hpp"
#include "decision.hpp"
#include "parallel.hpp"
#include "sde.hpp"

namespace antcdm {

/// Everything that defines which dynamics a trial runs.
struct Scenario {
    ModelParams params;
    ModelKind kind = ModelKind::baseline;
    GainModel gain = GainModel::sigmoid();
    AgentSettings agents;

    Site correct_site() const {
        return kind == ModelKind::agents ? better_site(params, agents) : better_site(params);
    }
};

/// Runs one trial (mean-field SDE or agent colony) and streams its samples to
/// `visit` until it returns false or the horizon is reached.
template <class Visitor>
void run_trial(const Scenario& sc, const IntegratorConfig& cfg, std::uint64_t stream, Visitor&& visit) {
    if (sc.kind == ModelKind::agents) {
        run_agents(sc.params, sc.agents, cfg.dt, cfg.t_max, cfg.seed, stream, visit);
    } else {
        integrate(sc.params, sc.kind, sc.gain, cfg, NoiseSource{CounterRng(cfg.seed, stream)}, ColonyState{}, visit);
    }
}

inline DecisionOutcome trial_outcome(const Scenario& sc, const IntegratorConfig& cfg, double theta, double hold,
                                     Site correct, std::uint64_t stream) {
    DecisionDetector det(theta, sc.params.n, hold, cfg.dt, correct);
    run_trial(sc, cfg, stream, [&](const ColonyState& s) { return !det.push(s); });
    return det.outcome();
}

struct SpeedAccuracyPoint {
    double theta = 0.0;
    double mean_decision_time = std::numeric_limits<double>::quiet_NaN(); // over decided trials
    double error_rate = std::numeric_limits<double>::quiet_NaN();         // over decided trials
    double timeout_rate = 0.0;
    std::size_t trials = 0;
};

struct SweepSpec {
    std::vector<double> thetas;
    std::size_t trials = 1000;
    double hold = 0.1;
    /// Overrides the reference site when the rates tie (e.g. symmetry studies).
    Site nominal_correct = Site::none;
    std::size_t jobs = 1;
    bool abort_on_all_timeout = true;
};

class AllTimeoutError : public std::runtime_error {
  public:
    explicit AllTimeoutError(double theta)
        : std::runtime_error("every trial timed out at theta=" + std::to_string(theta) +
                             "; error rate is undefined"),
          theta_(theta) {}
    double theta() const noexcept { return theta_; }

  private:
    double theta_;
};

struct SweepResult {
    std::vector<SpeedAccuracyPoint> points;
    std::vector<std::vector<DecisionOutcome>> outcomes; // [theta index][trial]
};

inline SpeedAccuracyPoint summarize(double theta, const std::vector<DecisionOutcome>& outcomes) {
    SpeedAccuracyPoint pt;
    pt.theta = theta;
    pt.trials = outcomes.size();
    std::size_t decided = 0, errors = 0, timeouts = 0;
    double time_sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.timeout) {
            ++timeouts;
            continue;
        }
        ++decided;
        time_sum += o.time;
        errors += !o.correct;
    }
    if (!outcomes.empty()) pt.timeout_rate = static_cast<double>(timeouts) / static_cast<double>(outcomes.size());
    if (decided > 0) {
        pt.mean_decision_time = time_sum / static_cast<double>(decided);
        pt.error_rate = static_cast<double>(errors) / static_cast<double>(decided);
    }
    return pt;
}

/// For each threshold, `trials` independent runs scored with the quorum-with-hold
/// rule. Trial j at threshold index m always uses stream (m, j), so two
/// scenarios swept with the same seed share their random numbers.
inline SweepResult run_sweep(const Scenario& sc, const IntegratorConfig& cfg, const SweepSpec& spec) {
    cfg.validate();
    sc.params.validate();
    if (spec.trials == 0) throw DomainError("sweep needs at least one trial");
    const Site correct = spec.nominal_correct != Site::none ? spec.nominal_correct : sc.correct_site();
    if (correct == Site::none) throw DomainError("sites are indistinguishable, so correctness is undefined");

    SweepResult out;
    out.outcomes.assign(spec.thetas.size(), std::vector<DecisionOutcome>(spec.trials));
    const std::size_t cells = spec.thetas.size() * spec.trials;
    parallel_for(cells, spec.jobs, [&](std::size_t idx) {
        const std::size_t m = idx / spec.trials, j = idx % spec.trials;
        out.outcomes[m][j] = trial_outcome(sc, cfg, spec.thetas[m], spec.hold, correct, trial_stream(m, j));
    });
    for (std::size_t m = 0; m < spec.thetas.size(); ++m) {
        out.points.push_back(summarize(spec.thetas[m], out.outcomes[m]));
        if (spec.abort_on_all_timeout && out.points.back().timeout_rate == 1.0)
            throw AllTimeoutError(spec.thetas[m]);
    }
    return out;
}

inline std::vector<SpeedAccuracyPoint> speed_accuracy_sweep(const Scenario& sc, const IntegratorConfig& cfg,
                                                            const SweepSpec& spec) {
    return run_sweep(sc, cfg, spec).points;
}

/// Sweep CSV row (without the header); undefined rates print as `nan`.
inline void write_sweep_row(std::ostream& os, const SpeedAccuracyPoint& p) {
    write_number(os, p.theta);
    os << ',';
    write_number(os, p.mean_decision_time);
    os << ',';
    write_number(os, p.error_rate);
    os << ',';
    write_number(os, p.timeout_rate);
    os << ',' << p.trials << '\n';
}

inline constexpr const char* kSweepHeader = "theta,mean_decision_time,error_rate,timeout_rate,trials";

} // namespace antcdm
