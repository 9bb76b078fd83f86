#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "params.hpp"

namespace antcdm {

/// Recruitment factor used in the modified model.
inline constexpr std::array<double, 6> kPublishedGainCoefficients{82.58, -205.33, 172.32, -54.03, 5.71, 0.9};
/// The curve-fit polynomial as printed next to the step function.
inline constexpr std::array<double, 6> kPublishedFitCoefficients{82.58, -205.33, 172.32, -54.03, 5.71, -0.11};

/// Horner evaluation, coefficients ordered highest degree first.
inline double polyval(std::span<const double> coefficients, double x) {
    double acc = 0.0;
    for (double c : coefficients) acc = acc * x + c;
    return acc;
}

enum class GainVariant { hard_step, sigmoid, paper_polynomial_eq1, refit_polynomial };

inline std::string_view to_string(GainVariant v) {
    switch (v) {
    case GainVariant::hard_step: return "hard_step";
    case GainVariant::sigmoid: return "sigmoid";
    case GainVariant::paper_polynomial_eq1: return "paper_polynomial_eq1";
    case GainVariant::refit_polynomial: return "refit_polynomial";
    }
    return "?";
}

inline bool parse_gain_variant(std::string_view s, GainVariant& out) {
    for (auto v : {GainVariant::hard_step, GainVariant::sigmoid, GainVariant::paper_polynomial_eq1,
                   GainVariant::refit_polynomial}) {
        if (to_string(v) == s) {
            out = v;
            return true;
        }
    }
    return false;
}

/// Recruitment gain as a function of a site's normalized population.
struct GainModel {
    GainVariant variant = GainVariant::sigmoid;
    std::vector<double> coefficients; // highest degree first; polynomial variants only

    static GainModel hard_step() { return {GainVariant::hard_step, {}}; }
    static GainModel sigmoid() { return {GainVariant::sigmoid, {}}; }
    static GainModel published_polynomial() {
        return {GainVariant::paper_polynomial_eq1, {kPublishedGainCoefficients.begin(), kPublishedGainCoefficients.end()}};
    }
    static GainModel refit(std::vector<double> coefficients) {
        if (coefficients.empty()) throw DomainError("refit_polynomial gain needs coefficients");
        return {GainVariant::refit_polynomial, std::move(coefficients)};
    }

    bool operator==(const GainModel&) const = default;
};

/// P^k / (P^k + T^k): probability that a tandem leader switches to transport.
inline double transport_probability(double population, double quorum, double steepness) {
    if (!(population >= 0.0) || !std::isfinite(population))
        throw DomainError("nest population must be finite and nonnegative");
    if (!(quorum > 0.0) || !std::isfinite(quorum)) throw DomainError("quorum population must be positive");
    if (!(steepness >= 1.0)) throw DomainError("steepness must be >= 1");
    if (population == quorum) return 0.5;
    // divide through by the larger term to stay finite for big exponents
    if (population < quorum) {
        const double r = std::pow(population / quorum, steepness);
        return r / (r + 1.0);
    }
    const double r = std::pow(quorum / population, steepness);
    return 1.0 / (1.0 + r);
}

/// Gain multiplier for normalized population u = y_i / n.
///
/// hard_step and sigmoid move between tandem speed (1) and transport speed (3).
/// refit_polynomial treats its polynomial as a transport probability, clamped to
/// [0,1] and lifted by 1 + 2p. paper_polynomial_eq1 is the printed factor,
/// unclamped.
inline double gain(double u, const GainModel& model, const ModelParams& params) {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("normalized population must lie in [0,1]");
    switch (model.variant) {
    case GainVariant::hard_step:
        return u <= params.quorum_T ? 1.0 : 3.0;
    case GainVariant::sigmoid:
        return 1.0 + 2.0 * transport_probability(u, params.quorum_T, params.steepness_k);
    case GainVariant::paper_polynomial_eq1:
        return polyval(model.coefficients, u);
    case GainVariant::refit_polynomial:
        return 1.0 + 2.0 * std::clamp(polyval(model.coefficients, u), 0.0, 1.0);
    }
    return 1.0;
}

} // namespace antcdm
