#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

#include "dynamics.hpp"
#include "rng.hpp"

namespace antcdm {

enum class Scheme { euler_maruyama, deterministic };

inline std::string_view to_string(Scheme s) {
    return s == Scheme::deterministic ? "deterministic" : "euler_maruyama";
}

inline bool parse_scheme(std::string_view s, Scheme& out) {
    if (s == "euler_maruyama") out = Scheme::euler_maruyama;
    else if (s == "deterministic") out = Scheme::deterministic;
    else return false;
    return true;
}

struct IntegratorConfig {
    double dt = 0.01;
    double t_max = 1000.0;
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::euler_maruyama;

    bool operator==(const IntegratorConfig&) const = default;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
        if (!(t_max >= dt) || !std::isfinite(t_max)) throw DomainError("t_max must be at least dt");
    }

    /// Number of steps after t = 0; samples = steps() + 1.
    std::size_t steps() const { return static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)); }
};

/// Noise channels used for each draw. `mirrored` relabels site channels so that
/// a run with swapped site parameters sees the same noise on the swapped sites.
struct NoiseSource {
    CounterRng rng;
    bool mirrored = false;

    double draw(std::size_t channel, std::uint64_t step) const {
        return rng.normal(mirrored ? Noise::mirror(channel) : channel, step);
    }
};

/// Maps a state back onto {y_i >= 0, y1 + y2 <= n}: negatives are clamped to
/// zero, an excess total is rescaled by n / (y1 + y2).
inline ColonyState project(ColonyState st, double n) {
    st.y1 = std::max(st.y1, 0.0);
    st.y2 = std::max(st.y2, 0.0);
    const double total = st.y1 + st.y2;
    if (total > n) {
        const double scale = n / total;
        st.y1 *= scale;
        st.y2 *= scale;
        // rounding can leave the sum an ulp above n
        while (st.y1 + st.y2 > n) {
            st.y1 = std::nextafter(st.y1, 0.0);
            st.y2 = std::nextafter(st.y2, 0.0);
        }
    }
    return st;
}

/// One Euler-Maruyama step (or explicit Euler when the scheme is deterministic).
/// Each channel contributes sigma * sqrt(dt) * xi through eta = sigma * xi / sqrt(dt).
inline ColonyState step(const ColonyState& st, const ModelParams& p, ModelKind kind, const GainModel& g,
                        const IntegratorConfig& cfg, const NoiseSource& noise, std::uint64_t step_index) {
    Noise eta;
    if (cfg.scheme == Scheme::euler_maruyama) {
        const double inv_sqrt_dt = 1.0 / std::sqrt(cfg.dt);
        for (std::size_t ch = 0; ch < Noise::kChannels; ++ch) {
            const double sigma = Noise::sigma(p, ch);
            if (sigma != 0.0) eta[ch] = sigma * noise.draw(ch, step_index) * inv_sqrt_dt;
        }
    }
    const Rates r = deriv(kind, st, p, g, eta);
    ColonyState next{st.y1 + r.dy1 * cfg.dt, st.y2 + r.dy2 * cfg.dt, static_cast<double>(step_index + 1) * cfg.dt};
    if (!std::isfinite(next.y1) || !std::isfinite(next.y2))
        throw IntegrationError("non-finite state during integration", step_index);
    return project(next, p.n);
}

/// Streams samples of one trajectory to `visit(const ColonyState&)`; a false
/// return stops the run early. The first sample is `initial` at t = 0.
template <class Visitor>
void integrate(const ModelParams& p, ModelKind kind, const GainModel& g, const IntegratorConfig& cfg,
               const NoiseSource& noise, ColonyState initial, Visitor&& visit) {
    p.validate();
    cfg.validate();
    if (kind == ModelKind::agents) throw DomainError("agent runs are not integrated by the SDE engine");
    initial.t = 0.0;
    require_feasible(initial, p);
    if (!visit(std::as_const(initial))) return;
    const std::size_t n_steps = cfg.steps();
    ColonyState st = initial;
    for (std::size_t i = 0; i < n_steps; ++i) {
        st = step(st, p, kind, g, cfg, noise, i);
        if (!visit(std::as_const(st))) return;
    }
}

struct Trajectory {
    std::vector<ColonyState> samples;
    IntegratorConfig config;
    ModelKind kind = ModelKind::baseline;
    GainModel gain;
    std::uint64_t stream = 0;
    double n = 0.0;
};

struct SimulateOptions {
    std::uint64_t stream = 0;
    ColonyState initial{};
    bool mirrored = false;
};

inline Trajectory simulate(const ModelParams& p, ModelKind kind, const GainModel& g, const IntegratorConfig& cfg,
                           const SimulateOptions& opt = {}) {
    Trajectory out{{}, cfg, kind, g, opt.stream, p.n};
    out.samples.reserve(cfg.steps() + 1);
    const NoiseSource noise{CounterRng(cfg.seed, opt.stream), opt.mirrored};
    integrate(p, kind, g, cfg, noise, opt.initial, [&](const ColonyState& s) {
        out.samples.push_back(s);
        return true;
    });
    return out;
}

inline void write_number(std::ostream& os, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    os << buf;
}

/// CSV with header `t,y1,y2,s`.
inline void write_trajectory_csv(std::ostream& os, const std::vector<ColonyState>& samples, double n) {
    os << "t,y1,y2,s\n";
    for (const auto& s : samples) {
        write_number(os, s.t);
        os << ',';
        write_number(os, s.y1);
        os << ',';
        write_number(os, s.y2);
        os << ',';
        write_number(os, s.uncommitted(n));
        os << '\n';
    }
}

} // namespace antcdm
