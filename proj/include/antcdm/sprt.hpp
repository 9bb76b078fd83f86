#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"

namespace antcdm {

struct SprtState {
    double sum = 0.0;      // cumulative log-likelihood ratio
    std::uint64_t steps = 0;
    double upper = 0.0;    // A > 0, accept H1 at or above
    double lower = 0.0;    // B < 0, accept H2 at or below

    static SprtState with_thresholds(double upper, double lower) {
        if (!(lower < 0.0 && 0.0 < upper)) throw DomainError("SPRT thresholds must satisfy B < 0 < A");
        return {0.0, 0, upper, lower};
    }
};

enum class SprtDecision { continue_sampling, accept_h1, accept_h2 };

inline SprtState sprt_update(SprtState s, double log_likelihood_ratio) {
    s.sum += log_likelihood_ratio;
    ++s.steps;
    return s;
}

inline SprtDecision sprt_decide(const SprtState& s) {
    if (s.sum >= s.upper) return SprtDecision::accept_h1;
    if (s.sum <= s.lower) return SprtDecision::accept_h2;
    return SprtDecision::continue_sampling;
}

/// log [ P(x | p1) / P(x | p0) ] for one Bernoulli observation.
inline double bernoulli_llr(bool x, double p0, double p1) {
    return x ? std::log(p1 / p0) : std::log((1.0 - p1) / (1.0 - p0));
}

/// Per-step log-likelihood ratios of a sampled trajectory under two site-quality
/// hypotheses: H1 uses the given discovery rates, H2 swaps them. Each step is
/// scored with the Gaussian transition density of the Euler-Maruyama scheme;
/// the diffusion matrix does not depend on q, so only the means differ. Steps
/// with a singular diffusion matrix contribute 0.
inline std::vector<double> trajectory_llr(std::span<const ColonyState> samples, const ModelParams& p,
                                          ModelKind kind, const GainModel& g, double dt) {
    std::vector<double> out;
    if (samples.size() < 2) return out;
    out.reserve(samples.size() - 1);
    const ModelParams alt = [&] {
        ModelParams a = p;
        std::swap(a.q[0], a.q[1]);
        return a;
    }();
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const ColonyState& st = samples[i];
        const double dy1 = samples[i + 1].y1 - st.y1;
        const double dy2 = samples[i + 1].y2 - st.y2;
        const Rates m1 = deriv(kind, st, p, g);
        const Rates m2 = deriv(kind, st, alt, g);

        const double s = st.uncommitted(p.n);
        const double g1 = kind == ModelKind::modified ? gain(st.y1 / p.n, g, p) : 1.0;
        const double g2 = kind == ModelKind::modified ? gain(st.y2 / p.n, g, p) : 1.0;
        // noise loadings (d y1, d y2) per channel
        const double lq = s * p.c * p.sigma_q;
        const double l_rp1 = st.y1 * g1 * p.sigma_r_prime;
        const double l_rp2 = st.y2 * g2 * p.sigma_r_prime;
        const double l_r1 = st.y1 * p.sigma_r_switch;
        const double l_r2 = st.y2 * p.sigma_r_switch;
        const double l_k1 = st.y1 * p.sigma_k;
        const double l_k2 = st.y2 * p.sigma_k;
        const double c11 = (lq * lq + l_rp1 * l_rp1 + l_r1 * l_r1 + l_r2 * l_r2 + l_k1 * l_k1) * dt;
        const double c22 = (lq * lq + l_rp2 * l_rp2 + l_r1 * l_r1 + l_r2 * l_r2 + l_k2 * l_k2) * dt;
        const double c12 = -(l_r1 * l_r1 + l_r2 * l_r2) * dt;
        const double det = c11 * c22 - c12 * c12;
        if (!(det > 1e-300)) {
            out.push_back(0.0);
            continue;
        }
        auto quad = [&](double e1, double e2) { return (c22 * e1 * e1 - 2.0 * c12 * e1 * e2 + c11 * e2 * e2) / det; };
        const double q1 = quad(dy1 - m1.dy1 * dt, dy2 - m1.dy2 * dt);
        const double q2 = quad(dy1 - m2.dy1 * dt, dy2 - m2.dy2 * dt);
        out.push_back(0.5 * (q2 - q1));
    }
    return out;
}

} // namespace antcdm
