#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

#include "params.hpp"

namespace antcdm {

enum class Site : std::uint8_t { none = 0, one = 1, two = 2 };

inline std::string_view to_string(Site s) {
    switch (s) {
    case Site::one: return "1";
    case Site::two: return "2";
    default: return "none";
    }
}

struct DecisionOutcome {
    Site chosen = Site::none;
    double time = 0.0; // crossing time of the durable run, or the last sample time on timeout
    bool correct = false;
    bool timeout = true;

    bool operator==(const DecisionOutcome&) const = default;
};

/// Online quorum-with-hold rule. A site is chosen once its population stays at
/// or above theta * n for `hold` time units; a crossing that recedes earlier is
/// discarded. The reported time is the start of the qualifying run.
class DecisionDetector {
  public:
    DecisionDetector(double theta, double n, double hold, double dt, Site correct_site = Site::none)
        : level_(theta * n), correct_(correct_site) {
        if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("decision threshold must lie in (0,1]");
        if (!(hold >= 0.0)) throw DomainError("hold duration must be nonnegative");
        if (!(dt > 0.0)) throw DomainError("dt must be positive");
        hold_samples_ = static_cast<std::size_t>(std::llround(hold / dt));
    }

    /// Feeds the next sample; returns true once a decision exists.
    bool push(const ColonyState& s) {
        if (decided()) return true;
        last_t_ = s.t;
        const std::array<double, 2> y{s.y1, s.y2};
        std::array<bool, 2> qualified{};
        for (int i = 0; i < 2; ++i) {
            if (y[i] >= level_) {
                if (run_length_[i] == 0) run_start_[i] = s.t;
                ++run_length_[i];
                qualified[i] = run_length_[i] > hold_samples_;
            } else {
                run_length_[i] = 0;
            }
        }
        if (qualified[0] || qualified[1]) {
            int winner = qualified[0] ? 0 : 1;
            if (qualified[0] && qualified[1]) {
                if (run_start_[1] < run_start_[0] || (run_start_[1] == run_start_[0] && y[1] > y[0])) winner = 1;
            }
            outcome_.chosen = winner == 0 ? Site::one : Site::two;
            outcome_.time = run_start_[winner];
            outcome_.timeout = false;
            outcome_.correct = outcome_.chosen == correct_;
        }
        return decided();
    }

    bool decided() const { return !outcome_.timeout; }

    /// Outcome so far; a timeout carries the last sample time.
    DecisionOutcome outcome() const {
        if (decided()) return outcome_;
        return {Site::none, last_t_, false, true};
    }

  private:
    double level_;
    Site correct_;
    std::size_t hold_samples_ = 0;
    std::array<std::size_t, 2> run_length_{};
    std::array<double, 2> run_start_{};
    double last_t_ = 0.0;
    DecisionOutcome outcome_{};
};

inline DecisionOutcome detect_decision(std::span<const ColonyState> samples, double n, double theta, double hold,
                                       double dt, Site correct_site = Site::none) {
    DecisionDetector det(theta, n, hold, dt, correct_site);
    for (const auto& s : samples) {
        if (det.push(s)) break;
    }
    return det.outcome();
}

/// Site with the larger discovery rate; none on a tie.
inline Site better_site(const ModelParams& p) {
    if (p.q[0] > p.q[1]) return Site::one;
    if (p.q[1] > p.q[0]) return Site::two;
    return Site::none;
}

} // namespace antcdm
