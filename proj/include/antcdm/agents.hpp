#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "decision.hpp"
#include "gain.hpp"
#include "params.hpp"
#include "rng.hpp"

namespace antcdm {

enum class AgentState : std::uint8_t { explore, tandem, transport };

struct Agent {
    AgentState state = AgentState::explore;
    Site site = Site::none; // committed site; none only while exploring

    bool operator==(const Agent&) const = default;
};

/// Per-site quality in [0,1]; used for both the scout's own assessment and the
/// tandem follower's evaluation (Bernoulli with success probability = quality).
struct AgentSettings {
    std::array<double, 2> quality{1.0, 1.0};

    bool operator==(const AgentSettings&) const = default;
};

/// Site judged correct in an agent run: higher quality, else higher discovery rate.
inline Site better_site(const ModelParams& p, const AgentSettings& a) {
    if (a.quality[0] > a.quality[1]) return Site::one;
    if (a.quality[1] > a.quality[0]) return Site::two;
    return better_site(p);
}

/// Result of one agent's tick: its next state plus recruits it asks for.
struct AgentTransition {
    Agent next;
    int recruits = 0; // 0, 1 (tandem run) or 3 (transport)
    bool entered_transport = false;
    bool left_transport_to_explore = false;
};

struct AgentCounters {
    std::uint64_t transport_entries = 0;
    std::uint64_t transport_to_explore = 0;
};

class World {
  public:
    World(const ModelParams& p, const AgentSettings& a, double dt) : params_(p), settings_(a), dt_(dt) {
        p.validate();
        if (!(dt > 0.0)) throw DomainError("dt must be positive");
        const double rounded = std::round(p.n);
        if (rounded < 1.0 || rounded != p.n) throw DomainError("agent colony size n must be a positive integer");
        for (double qual : a.quality)
            if (!(qual >= 0.0 && qual <= 1.0)) throw DomainError("site quality must lie in [0,1]");
        if ((p.q[0] + p.q[1]) * dt > 1.0) throw DomainError("discovery probability per tick exceeds 1");
        for (int i = 0; i < 2; ++i) {
            if ((p.r_switch[i] + p.k_decay[i] + p.r_prime[i]) * dt > 1.0)
                throw DomainError("committed-agent event probability per tick exceeds 1");
        }
        agents_.assign(static_cast<std::size_t>(rounded), Agent{});
    }

    const ModelParams& params() const { return params_; }
    const AgentSettings& settings() const { return settings_; }
    double dt() const { return dt_; }
    std::uint64_t tick_count() const { return tick_; }
    const std::vector<Agent>& agents() const { return agents_; }
    const AgentCounters& counters() const { return counters_; }

    /// Number of agents committed to `site` (1 or 2).
    std::size_t population(int site) const { return population_[site - 1]; }
    std::size_t uncommitted() const { return agents_.size() - population_[0] - population_[1]; }

    ColonyState state() const {
        return {static_cast<double>(population_[0]), static_cast<double>(population_[1]),
                static_cast<double>(tick_) * dt_};
    }

    /// Replaces the population (same size); site counts are recomputed.
    void assign(std::vector<Agent> agents) {
        if (agents.size() != agents_.size()) throw DomainError("agent count must stay equal to n");
        for (const auto& a : agents)
            if ((a.state == AgentState::explore) != (a.site == Site::none))
                throw DomainError("explorers are uncommitted and committed agents have a site");
        agents_ = std::move(agents);
        recount();
    }

    /// Synchronous update of every agent against the start-of-tick snapshot.
    void tick(const CounterRng& rng);

  private:
    void recount() {
        population_ = {0, 0};
        for (const auto& ag : agents_) {
            if (ag.site == Site::one) ++population_[0];
            else if (ag.site == Site::two) ++population_[1];
        }
    }

    ModelParams params_;
    AgentSettings settings_;
    double dt_;
    std::vector<Agent> agents_;
    std::array<std::size_t, 2> population_{};
    std::uint64_t tick_ = 0;
    AgentCounters counters_;
};

namespace detail {
enum AgentDraw : std::uint64_t { kEvent = 0, kAssess = 1, kTransport = 2, kDrawsPerAgent = 4 };
}

/// One agent's transition for the current tick.
///
/// explore: finds site i with probability q_i dt and commits (tandem) if its
/// own assessment is positive. tandem/transport: switches site (r_i dt),
/// decommits to explore (k_i dt), or attempts recruitment (r'_i dt). A tandem
/// run whose follower rejects the site sends the leader back to explore; an
/// accepted run switches the leader to transport with probability
/// P^k / (P^k + T^k). A transport event carries three recruits.
inline AgentTransition agent_step(const Agent& agent, const World& world, const CounterRng& rng,
                                  std::size_t index, std::uint64_t tick) {
    using namespace detail;
    const auto& p = world.params();
    const double dt = world.dt();
    const std::uint64_t base = static_cast<std::uint64_t>(index) * kDrawsPerAgent;
    AgentTransition out{agent};
    const double u = rng.uniform(base + kEvent, tick);

    if (agent.state == AgentState::explore) {
        int found = -1;
        if (u < p.q[0] * dt) found = 0;
        else if (u < (p.q[0] + p.q[1]) * dt) found = 1;
        if (found >= 0 && rng.uniform(base + kAssess, tick) < world.settings().quality[found])
            out.next = {AgentState::tandem, found == 0 ? Site::one : Site::two};
        return out;
    }

    const int i = agent.site == Site::one ? 0 : 1;
    const double p_switch = p.r_switch[i] * dt;
    const double p_decay = p_switch + p.k_decay[i] * dt;
    const double p_recruit = p_decay + p.r_prime[i] * dt;

    if (u < p_switch) {
        out.next = {AgentState::tandem, i == 0 ? Site::two : Site::one};
    } else if (u < p_decay) {
        out.next = {AgentState::explore, Site::none};
        out.left_transport_to_explore = agent.state == AgentState::transport;
    } else if (u < p_recruit) {
        if (agent.state == AgentState::transport) {
            out.recruits = 3;
        } else if (rng.uniform(base + kAssess, tick) < world.settings().quality[i]) {
            out.recruits = 1;
            const double pop = static_cast<double>(world.population(i + 1));
            if (rng.uniform(base + kTransport, tick) < transport_probability(pop, p.quorum_T * p.n, p.steepness_k)) {
                out.next.state = AgentState::transport;
                out.entered_transport = true;
            }
        } else {
            out.next = {AgentState::explore, Site::none};
        }
    }
    return out;
}

inline void World::tick(const CounterRng& rng) {
    std::vector<Agent> next(agents_.size());
    std::vector<std::size_t> pool; // explorers still uncommitted after their own move
    std::vector<AgentTransition> moves(agents_.size());
    for (std::size_t a = 0; a < agents_.size(); ++a) {
        moves[a] = agent_step(agents_[a], *this, rng, a, tick_);
        next[a] = moves[a].next;
        if (agents_[a].state == AgentState::explore && next[a].state == AgentState::explore) pool.push_back(a);
    }
    std::size_t taken = 0;
    for (std::size_t a = 0; a < agents_.size(); ++a) {
        const auto& m = moves[a];
        counters_.transport_entries += m.entered_transport;
        counters_.transport_to_explore += m.left_transport_to_explore;
        for (int r = 0; r < m.recruits && taken < pool.size(); ++r)
            next[pool[taken++]] = {AgentState::tandem, agents_[a].site};
    }
    agents_ = std::move(next);
    recount();
    ++tick_;
}

/// Streams per-tick populations to `visit(const ColonyState&)`, starting with
/// the all-exploring colony at t = 0; stops early on a false return.
template <class Visitor>
AgentCounters run_agents(const ModelParams& p, const AgentSettings& a, double dt, double horizon,
                         std::uint64_t seed, std::uint64_t stream, Visitor&& visit) {
    World world(p, a, dt);
    const CounterRng rng(seed, stream);
    const auto ticks = static_cast<std::uint64_t>(std::floor(horizon / dt + 1e-9));
    if (!visit(world.state())) return world.counters();
    for (std::uint64_t k = 0; k < ticks; ++k) {
        world.tick(rng);
        if (!visit(world.state())) break;
    }
    return world.counters();
}

struct ColonyRun {
    std::vector<ColonyState> series;
    DecisionOutcome outcome;
    AgentCounters counters;
};

struct ColonyRunConfig {
    double dt = 0.01;
    double horizon = 100.0;
    double theta = 0.5;
    double hold = 0.1;
};

/// Full agent run with decision detection (the series covers the whole horizon).
inline ColonyRun run_colony(const ModelParams& p, const AgentSettings& a, const ColonyRunConfig& cfg,
                            std::uint64_t seed, std::uint64_t stream = 0) {
    ColonyRun out;
    DecisionDetector det(cfg.theta, p.n, cfg.hold, cfg.dt, better_site(p, a));
    out.counters = run_agents(p, a, cfg.dt, cfg.horizon, seed, stream, [&](const ColonyState& s) {
        out.series.push_back(s);
        det.push(s);
        return true;
    });
    out.outcome = det.outcome();
    return out;
}

} // namespace antcdm
