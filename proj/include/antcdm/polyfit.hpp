#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "gain.hpp"

namespace antcdm {

struct PolyFit {
    std::vector<double> coefficients; // highest degree first
    double rmse = 0.0;
};

/// Least-squares polynomial through (x, y) via column-pivoted Householder QR.
inline PolyFit fit_polynomial(std::span<const double> x, std::span<const double> y, int degree) {
    if (degree < 1) throw FitError("polynomial degree must be at least 1");
    if (x.size() != y.size()) throw FitError("sample and target sizes differ");
    const auto cols = static_cast<Eigen::Index>(degree + 1);
    if (static_cast<Eigen::Index>(x.size()) <= cols)
        throw FitError("grid needs more than degree + 1 points (" + std::to_string(x.size()) + " given)");
    const auto rows = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd V(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        double pw = 1.0;
        for (Eigen::Index j = cols - 1; j >= 0; --j) {
            V(i, j) = pw;
            pw *= x[static_cast<std::size_t>(i)];
        }
        b(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    if (qr.rank() < cols)
        throw FitError("rank-deficient least-squares system (rank " + std::to_string(qr.rank()) + " < " +
                       std::to_string(cols) + ")");
    const Eigen::VectorXd coef = qr.solve(b);
    PolyFit out;
    out.coefficients.assign(coef.data(), coef.data() + coef.size());
    const Eigen::VectorXd resid = V * coef - b;
    out.rmse = std::sqrt(resid.squaredNorm() / static_cast<double>(rows));
    return out;
}

/// Transport-probability shapes a polynomial can be fitted to.
struct StepTarget {
    enum class Kind { hard_step, sigmoid, constant } kind = Kind::hard_step;
    double quorum = 0.5;    // T, as a fraction
    double steepness = 4.0; // sigmoid exponent
    double value = 0.5;     // constant target

    double operator()(double u) const {
        switch (kind) {
        case Kind::hard_step: return u <= quorum ? 0.0 : 1.0;
        case Kind::sigmoid: return transport_probability(u, quorum, steepness);
        case Kind::constant: return value;
        }
        return 0.0;
    }
};

inline bool parse_step_target(std::string_view s, StepTarget::Kind& out) {
    if (s == "hard_step") out = StepTarget::Kind::hard_step;
    else if (s == "sigmoid") out = StepTarget::Kind::sigmoid;
    else if (s == "constant") out = StepTarget::Kind::constant;
    else return false;
    return true;
}

inline std::string_view to_string(StepTarget::Kind k) {
    switch (k) {
    case StepTarget::Kind::hard_step: return "hard_step";
    case StepTarget::Kind::sigmoid: return "sigmoid";
    case StepTarget::Kind::constant: return "constant";
    }
    return "?";
}

/// Fits `target` sampled on `grid` (points in [0,1]).
inline PolyFit fit_step_polynomial(const StepTarget& target, int degree, std::span<const double> grid) {
    for (double u : grid)
        if (!(u >= 0.0 && u <= 1.0)) throw FitError("fit grid points must lie in [0,1]");
    std::vector<double> y(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) y[i] = target(grid[i]);
    return fit_polynomial(grid, y, degree);
}

} // namespace antcdm
