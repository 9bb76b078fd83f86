#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "dynamics.hpp"
#include "rng.hpp"

namespace antcdm {

struct XY {
    double x1 = 0.0; // difference axis
    double x2 = 0.0; // total axis
};

/// Rotation by 45 degrees: x1 = (y1 - y2)/sqrt2, x2 = (y1 + y2)/sqrt2.
inline XY transform_to_xy(double y1, double y2) {
    constexpr double inv = 1.0 / std::numbers::sqrt2;
    return {(y1 - y2) * inv, (y1 + y2) * inv};
}

inline ColonyState inverse_transform(double x1, double x2) {
    constexpr double inv = 1.0 / std::numbers::sqrt2;
    return {(x2 + x1) * inv, (x2 - x1) * inv, 0.0};
}

/// Chain rule applied to the modified model: xdot = R ydot.
inline XY deriv_transformed(double x1, double x2, const ModelParams& p, const GainModel& g, const Noise& eta = {}) {
    const Rates r = deriv_modified(inverse_transform(x1, x2), p, g, eta);
    return transform_to_xy(r.dy1, r.dy2);
}

inline XY deriv_transformed(ModelKind kind, double x1, double x2, const ModelParams& p, const GainModel& g,
                            const Noise& eta = {}) {
    const Rates r = deriv(kind, inverse_transform(x1, x2), p, g, eta);
    return transform_to_xy(r.dy1, r.dy2);
}

struct DriftPoint {
    double x1 = 0.0;
    double x2 = 0.0;
    double mean = 0.0;     // mean of x1dot over noise draws
    double variance = 0.0; // sample variance (0 for a single replicate)
};

struct DriftEstimate {
    std::vector<DriftPoint> points;
    std::vector<double> infeasible_x1; // grid values whose (y1, y2) leaves the simplex
    /// (max - min of mean drift) / noise sd; +inf with zero noise and varying drift.
    double constancy = 0.0;
    /// Largest adjacent jump across a quorum crossing over the largest adjacent
    /// change elsewhere; NaN when no adjacent pair straddles the quorum.
    double quorum_jump_ratio = std::numeric_limits<double>::quiet_NaN();
};

/// Monte Carlo mean/variance of x1dot at fixed x2 over a grid of x1 values.
/// Noise values are eta = sigma * xi with xi standard normal per channel.
inline DriftEstimate estimate_drift(const ModelParams& p, ModelKind kind, const GainModel& g, double x2_pinned,
                                    std::span<const double> x1_grid, std::size_t replicates, std::uint64_t seed) {
    p.validate();
    if (replicates == 0) throw DomainError("estimate_drift needs at least one replicate");
    if (kind == ModelKind::agents) throw DomainError("drift estimation applies to the mean-field models");
    DriftEstimate out;
    std::vector<std::size_t> grid_index;
    for (std::size_t gi = 0; gi < x1_grid.size(); ++gi) {
        const double x1 = x1_grid[gi];
        if (!inverse_transform(x1, x2_pinned).feasible(p.n)) {
            out.infeasible_x1.push_back(x1);
            continue;
        }
        const CounterRng rng(seed, gi);
        double mean = 0.0, m2 = 0.0;
        for (std::size_t rep = 0; rep < replicates; ++rep) {
            Noise eta;
            for (std::size_t ch = 0; ch < Noise::kChannels; ++ch) {
                const double sigma = Noise::sigma(p, ch);
                if (sigma != 0.0) eta[ch] = sigma * rng.normal(ch, rep);
            }
            const double v = deriv_transformed(kind, x1, x2_pinned, p, g, eta).x1;
            const double delta = v - mean;
            mean += delta / static_cast<double>(rep + 1);
            m2 += delta * (v - mean);
        }
        out.points.push_back({x1, x2_pinned, mean, replicates > 1 ? m2 / static_cast<double>(replicates - 1) : 0.0});
        grid_index.push_back(gi);
    }
    if (out.points.empty()) return out;

    double lo = out.points.front().mean, hi = lo, var_sum = 0.0;
    for (const auto& pt : out.points) {
        lo = std::min(lo, pt.mean);
        hi = std::max(hi, pt.mean);
        var_sum += pt.variance;
    }
    const double sd = std::sqrt(var_sum / static_cast<double>(out.points.size()));
    const double spread = hi - lo;
    out.constancy = sd > 0.0 ? spread / sd : (spread > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);

    double jump = -1.0, elsewhere = 0.0;
    for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
        if (grid_index[i + 1] != grid_index[i] + 1) continue;
        const auto a = inverse_transform(out.points[i].x1, x2_pinned);
        const auto b = inverse_transform(out.points[i + 1].x1, x2_pinned);
        const double T = p.quorum_T;
        const bool straddles = ((a.y1 / p.n <= T) != (b.y1 / p.n <= T)) || ((a.y2 / p.n <= T) != (b.y2 / p.n <= T));
        const double d = std::abs(out.points[i + 1].mean - out.points[i].mean);
        if (straddles) jump = std::max(jump, d);
        else elsewhere = std::max(elsewhere, d);
    }
    if (jump >= 0.0) {
        out.quorum_jump_ratio = elsewhere > 0.0 ? jump / elsewhere : std::numeric_limits<double>::infinity();
    }
    return out;
}

/// Evenly spaced grid with `points` values from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < points; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

} // namespace antcdm
