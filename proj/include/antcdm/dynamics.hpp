#pragma once

#include <array>
#include <string_view>

#include "gain.hpp"
#include "params.hpp"

namespace antcdm {

/// Instantaneous values of the eight eta channels.
struct Noise {
    std::array<double, 2> q{};
    std::array<double, 2> r_prime{};
    std::array<double, 2> r_switch{};
    std::array<double, 2> k_decay{};

    static constexpr std::size_t kChannels = 8;

    /// Channel order: q1 q2 r'1 r'2 r1 r2 k1 k2.
    double& operator[](std::size_t ch) {
        switch (ch / 2) {
        case 0: return q[ch % 2];
        case 1: return r_prime[ch % 2];
        case 2: return r_switch[ch % 2];
        default: return k_decay[ch % 2];
        }
    }

    static double sigma(const ModelParams& p, std::size_t ch) {
        switch (ch / 2) {
        case 0: return p.sigma_q;
        case 1: return p.sigma_r_prime;
        case 2: return p.sigma_r_switch;
        default: return p.sigma_k;
        }
    }

    /// Channel of the same kind at the other site.
    static constexpr std::size_t mirror(std::size_t ch) { return ch ^ 1u; }
};

struct Rates {
    double dy1 = 0.0;
    double dy2 = 0.0;
};

enum class ModelKind { baseline, modified, agents };

inline std::string_view to_string(ModelKind k) {
    switch (k) {
    case ModelKind::baseline: return "baseline";
    case ModelKind::modified: return "modified";
    case ModelKind::agents: return "agents";
    }
    return "?";
}

inline bool parse_model_kind(std::string_view s, ModelKind& out) {
    for (auto k : {ModelKind::baseline, ModelKind::modified, ModelKind::agents}) {
        if (to_string(k) == s) {
            out = k;
            return true;
        }
    }
    return false;
}

namespace detail {

// Right-hand side with explicit recruitment multipliers. Written so that
// relabelling the sites permutes the two outputs bit-for-bit.
inline Rates rhs(const ColonyState& st, const ModelParams& p, const Noise& eta, double g1, double g2) {
    const double s = p.n - (st.y1 + st.y2);
    const double discover1 = s * (p.q[0] + p.c * eta.q[0]);
    const double discover2 = s * (p.q[1] + p.c * eta.q[1]);
    const double recruit1 = st.y1 * (p.r_prime[0] + eta.r_prime[0]) * g1;
    const double recruit2 = st.y2 * (p.r_prime[1] + eta.r_prime[1]) * g2;
    const double switch1 = st.y1 * (p.r_switch[0] + eta.r_switch[0]);
    const double switch2 = st.y2 * (p.r_switch[1] + eta.r_switch[1]);
    const double decay1 = st.y1 * (p.k_decay[0] + eta.k_decay[0]);
    const double decay2 = st.y2 * (p.k_decay[1] + eta.k_decay[1]);
    return {discover1 + recruit1 + switch2 - switch1 - decay1, discover2 + recruit2 + switch1 - switch2 - decay2};
}

} // namespace detail

/// Baseline recruitment model: recruitment independent of nest population.
inline Rates deriv_baseline(const ColonyState& st, const ModelParams& p, const Noise& eta = {}) {
    require_feasible(st, p);
    return detail::rhs(st, p, eta, 1.0, 1.0);
}

/// Modified model: each recruitment term is scaled by gain(y_i / n).
inline Rates deriv_modified(const ColonyState& st, const ModelParams& p, const GainModel& g, const Noise& eta = {}) {
    require_feasible(st, p);
    return detail::rhs(st, p, eta, gain(st.y1 / p.n, g, p), gain(st.y2 / p.n, g, p));
}

inline Rates deriv(ModelKind kind, const ColonyState& st, const ModelParams& p, const GainModel& g,
                   const Noise& eta = {}) {
    if (kind == ModelKind::modified) return deriv_modified(st, p, g, eta);
    return deriv_baseline(st, p, eta);
}

} // namespace antcdm
