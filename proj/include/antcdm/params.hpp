#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace antcdm {

/// Rates and noise amplitudes of the two-site recruitment model. Index 0 is
/// site 1, index 1 is site 2.
struct ModelParams {
    double n = 100.0;                          // colony size (scouts)
    std::array<double, 2> q{0.12, 0.08};       // discovery rates
    std::array<double, 2> r_prime{0.3, 0.2};   // recruitment rates (quality dependent)
    std::array<double, 2> r_switch{0.02, 0.02};// spontaneous switching rates
    std::array<double, 2> k_decay{0.05, 0.05}; // decommitment rates
    double c = 1.0;                            // scales discovery noise only

    // amplitudes of the eta channels (shared by both sites, drawn independently)
    double sigma_q = 0.1;
    double sigma_r_prime = 0.05;
    double sigma_r_switch = 0.02;
    double sigma_k = 0.02;

    double quorum_T = 0.5;    // fraction of n
    double steepness_k = 4.0; // >= 1

    bool operator==(const ModelParams&) const = default;

    struct Violation {
        std::string field; // name as used in config files, e.g. "quorum_T"
        std::string message;
    };

    /// Every violated constraint; empty when valid.
    std::vector<Violation> violations() const {
        std::vector<Violation> out;
        auto nonneg = [&](double v, std::string name) {
            if (!std::isfinite(v) || v < 0.0) out.push_back({std::move(name), "must be a finite nonnegative number"});
        };
        if (!std::isfinite(n) || n <= 0.0) out.push_back({"n", "must be positive"});
        for (int i = 0; i < 2; ++i) {
            const auto idx = std::to_string(i + 1);
            nonneg(q[i], "q" + idx);
            nonneg(r_prime[i], "r_prime" + idx);
            nonneg(r_switch[i], "r_switch" + idx);
            nonneg(k_decay[i], "k_decay" + idx);
        }
        nonneg(c, "c");
        nonneg(sigma_q, "sigma_q");
        nonneg(sigma_r_prime, "sigma_r_prime");
        nonneg(sigma_r_switch, "sigma_r_switch");
        nonneg(sigma_k, "sigma_k");
        if (!(quorum_T > 0.0 && quorum_T < 1.0)) out.push_back({"quorum_T", "must lie in the open interval (0,1)"});
        if (!(steepness_k >= 1.0) || !std::isfinite(steepness_k)) out.push_back({"steepness_k", "must be >= 1"});
        return out;
    }

    void validate() const {
        auto v = violations();
        if (!v.empty()) throw DomainError("invalid model parameters: " + v.front().field + " " + v.front().message);
    }

    bool symmetric() const {
        return q[0] == q[1] && r_prime[0] == r_prime[1] && r_switch[0] == r_switch[1] &&
               k_decay[0] == k_decay[1];
    }

    /// Site-1/site-2 relabelling.
    ModelParams swapped_sites() const {
        ModelParams p = *this;
        std::swap(p.q[0], p.q[1]);
        std::swap(p.r_prime[0], p.r_prime[1]);
        std::swap(p.r_switch[0], p.r_switch[1]);
        std::swap(p.k_decay[0], p.k_decay[1]);
        return p;
    }
};

/// Committed populations; the uncommitted pool is s = n - y1 - y2.
struct ColonyState {
    double y1 = 0.0;
    double y2 = 0.0;
    double t = 0.0;

    double uncommitted(double n) const { return n - (y1 + y2); }

    bool feasible(double n) const {
        return std::isfinite(y1) && std::isfinite(y2) && y1 >= 0.0 && y2 >= 0.0 && y1 + y2 <= n;
    }

    bool operator==(const ColonyState&) const = default;
};

inline void require_feasible(const ColonyState& s, const ModelParams& p) {
    if (!s.feasible(p.n)) {
        throw DomainError("colony state (y1=" + std::to_string(s.y1) + ", y2=" + std::to_string(s.y2) +
                          ") is outside 0 <= y_i, y1 + y2 <= n");
    }
}

} // namespace antcdm
