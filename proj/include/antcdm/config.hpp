#pragma once

// Flat key-value experiment configuration.
//
//   # comment
//   params.q1 = 0.12
//   sweep.thetas = 0.3, 0.4, 0.5
//
// Every key, its default and its help text live in field_table(); defaults,
// parsing, rendering and --help are all generated from it.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "agents.hpp"
#include "gain.hpp"
#include "polyfit.hpp"
#include "sde.hpp"
#include "sweep.hpp"
#include "transform.hpp"

namespace antcdm {

struct DriftSpec {
    double x2 = 0.0;
    double x1_min = 0.0;
    double x1_max = 0.0;
    std::size_t x1_points = 0;
    std::size_t replicates = 0;

    bool operator==(const DriftSpec&) const = default;
};

struct FitSpec {
    StepTarget::Kind target = StepTarget::Kind::hard_step;
    int degree = 5;
    std::size_t grid_points = 101;

    bool operator==(const FitSpec&) const = default;
};

struct ExperimentConfig {
    ModelParams params;
    IntegratorConfig integrator;
    ModelKind model = ModelKind::baseline;
    GainVariant gain = GainVariant::sigmoid;
    std::vector<double> gain_coefficients; // refit_polynomial only; empty = fit from the fit block
    double theta = 0.5;
    std::optional<double> hold; // unset = 10 * dt
    std::vector<double> thetas;
    std::size_t trials = 0;
    std::vector<ModelKind> compare_models;
    AgentSettings agents;
    std::size_t agent_replicates = 0;
    DriftSpec drift;
    FitSpec fit;
    std::string output_dir;

    bool operator==(const ExperimentConfig&) const = default;

    double hold_duration() const { return hold ? *hold : 10.0 * integrator.dt; }

    std::vector<double> fit_grid() const { return linspace(0.0, 1.0, fit.grid_points); }

    StepTarget fit_target() const {
        StepTarget t;
        t.kind = fit.target;
        t.quorum = params.quorum_T;
        t.steepness = params.steepness_k;
        return t;
    }

    GainModel gain_model() const {
        switch (gain) {
        case GainVariant::hard_step: return GainModel::hard_step();
        case GainVariant::sigmoid: return GainModel::sigmoid();
        case GainVariant::paper_polynomial_eq1: return GainModel::published_polynomial();
        case GainVariant::refit_polynomial:
            if (!gain_coefficients.empty()) return GainModel::refit(gain_coefficients);
            return GainModel::refit(fit_step_polynomial(fit_target(), fit.degree, fit_grid()).coefficients);
        }
        return GainModel::sigmoid();
    }

    Scenario scenario(ModelKind kind) const { return {params, kind, gain_model(), agents}; }
    Scenario scenario() const { return scenario(model); }

    SweepSpec sweep_spec(std::size_t jobs) const {
        SweepSpec s;
        s.thetas = thetas;
        s.trials = trials;
        s.hold = hold_duration();
        s.jobs = jobs;
        return s;
    }
};

/// All problems found in a config, each prefixed with a line number (syntax)
/// or a field path (validation).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& p : v) out += "\n  " + p;
        return out;
    }
    std::vector<std::string> problems_;
};

namespace config_detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<std::uint64_t> to_uint(std::string_view s) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
    return out;
}

using Setter = std::function<std::optional<std::string>(ExperimentConfig&, std::string_view)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

template <class Access>
Setter real_at(Access access) {
    return [access](ExperimentConfig& c, std::string_view v) -> std::optional<std::string> {
        auto d = to_double(v);
        if (!d) return "expected a number, got '" + std::string(v) + "'";
        access(c) = *d;
        return std::nullopt;
    };
}

template <class Access>
Setter count_at(Access access) {
    return [access](ExperimentConfig& c, std::string_view v) -> std::optional<std::string> {
        auto d = to_uint(v);
        if (!d) return "expected a nonnegative integer, got '" + std::string(v) + "'";
        access(c) = static_cast<std::remove_cvref_t<decltype(access(c))>>(*d);
        return std::nullopt;
    };
}

inline std::optional<std::string> parse_doubles(std::string_view v, std::vector<double>& out) {
    std::vector<double> tmp;
    for (const auto& item : split_list(v)) {
        auto d = to_double(item);
        if (!d) return "expected a comma-separated list of numbers, got '" + item + "'";
        tmp.push_back(*d);
    }
    out = std::move(tmp);
    return std::nullopt;
}

} // namespace config_detail

struct FieldSpec {
    std::string key;
    std::string default_value;
    std::string help;
    config_detail::Setter set;
    config_detail::Getter get;
};

/// The single table of configuration keys and their defaults.
inline const std::vector<FieldSpec>& field_table() {
    using namespace config_detail;
    using C = ExperimentConfig;
    static const std::vector<FieldSpec> table = [] {
        std::vector<FieldSpec> t;
        auto num = [&t](std::string key, std::string def, std::string help, auto access) {
            t.push_back({std::move(key), std::move(def), std::move(help), real_at(access),
                         [access](const C& c) { return format_double(access(c)); }});
        };
        auto cnt = [&t](std::string key, std::string def, std::string help, auto access) {
            t.push_back({std::move(key), std::move(def), std::move(help), count_at(access),
                         [access](const C& c) { return std::to_string(access(c)); }});
        };

        num("params.n", "100", "colony size (scouts)", [](auto& c) -> auto& { return c.params.n; });
        num("params.q1", "0.12", "discovery rate, site 1", [](auto& c) -> auto& { return c.params.q[0]; });
        num("params.q2", "0.08", "discovery rate, site 2", [](auto& c) -> auto& { return c.params.q[1]; });
        num("params.r_prime1", "0.3", "recruitment rate, site 1", [](auto& c) -> auto& { return c.params.r_prime[0]; });
        num("params.r_prime2", "0.2", "recruitment rate, site 2", [](auto& c) -> auto& { return c.params.r_prime[1]; });
        num("params.r_switch1", "0.02", "switch rate away from site 1",
            [](auto& c) -> auto& { return c.params.r_switch[0]; });
        num("params.r_switch2", "0.02", "switch rate away from site 2",
            [](auto& c) -> auto& { return c.params.r_switch[1]; });
        num("params.k_decay1", "0.05", "decommitment rate, site 1", [](auto& c) -> auto& { return c.params.k_decay[0]; });
        num("params.k_decay2", "0.05", "decommitment rate, site 2", [](auto& c) -> auto& { return c.params.k_decay[1]; });
        num("params.c", "1", "discovery-noise coefficient", [](auto& c) -> auto& { return c.params.c; });
        num("params.sigma_q", "0.1", "noise amplitude, discovery", [](auto& c) -> auto& { return c.params.sigma_q; });
        num("params.sigma_r_prime", "0.05", "noise amplitude, recruitment",
            [](auto& c) -> auto& { return c.params.sigma_r_prime; });
        num("params.sigma_r_switch", "0.02", "noise amplitude, switching",
            [](auto& c) -> auto& { return c.params.sigma_r_switch; });
        num("params.sigma_k", "0.02", "noise amplitude, decommitment", [](auto& c) -> auto& { return c.params.sigma_k; });
        num("params.quorum_T", "0.5", "transport quorum, fraction of n in (0,1)",
            [](auto& c) -> auto& { return c.params.quorum_T; });
        num("params.steepness_k", "4", "transport sigmoid exponent (>= 1)",
            [](auto& c) -> auto& { return c.params.steepness_k; });

        num("integrator.dt", "0.01", "time step", [](auto& c) -> auto& { return c.integrator.dt; });
        num("integrator.t_max", "1000", "horizon", [](auto& c) -> auto& { return c.integrator.t_max; });
        cnt("integrator.seed", "1", "master seed", [](auto& c) -> auto& { return c.integrator.seed; });
        t.push_back({"integrator.scheme", "euler_maruyama", "euler_maruyama | deterministic",
                     [](C& c, std::string_view v) -> std::optional<std::string> {
                         if (!parse_scheme(v, c.integrator.scheme)) return "unknown scheme '" + std::string(v) + "'";
                         return std::nullopt;
                     },
                     [](const C& c) { return std::string(to_string(c.integrator.scheme)); }});

        t.push_back({"model.selector", "baseline", "baseline | modified | agents",
                     [](C& c, std::string_view v) -> std::optional<std::string> {
                         if (!parse_model_kind(v, c.model)) return "unknown model '" + std::string(v) + "'";
                         return std::nullopt;
                     },
                     [](const C& c) { return std::string(to_string(c.model)); }});
        t.push_back({"model.gain", "sigmoid", "hard_step | sigmoid | paper_polynomial_eq1 | refit_polynomial",
                     [](C& c, std::string_view v) -> std::optional<std::string> {
                         if (!parse_gain_variant(v, c.gain)) return "unknown gain variant '" + std::string(v) + "'";
                         return std::nullopt;
                     },
                     [](const C& c) { return std::string(to_string(c.gain)); }});
        t.push_back({"model.gain_coefficients", "",
                     "refit polynomial, highest degree first (empty: fit from the fit.* block)",
                     [](C& c, std::string_view v) { return parse_doubles(v, c.gain_coefficients); },
                     [](const C& c) { return join_doubles(c.gain_coefficients); }});

        num("decision.theta", "0.5", "threshold fraction for single-run outcomes",
            [](auto& c) -> auto& { return c.theta; });
        t.push_back({"decision.hold", "auto", "hold duration before a crossing counts (auto = 10*dt)",
                     [](C& c, std::string_view v) -> std::optional<std::string> {
                         if (v == "auto") {
                             c.hold.reset();
                             return std::nullopt;
                         }
                         auto d = to_double(v);
                         if (!d) return "expected a number or 'auto', got '" + std::string(v) + "'";
                         c.hold = *d;
                         return std::nullopt;
                     },
                     [](const C& c) { return c.hold ? format_double(*c.hold) : std::string("auto"); }});

        t.push_back({"sweep.thetas", "0.3, 0.4, 0.5, 0.6, 0.7", "decision thresholds, ascending, in (0,1]",
                     [](C& c, std::string_view v) { return parse_doubles(v, c.thetas); },
                     [](const C& c) { return join_doubles(c.thetas); }});
        cnt("sweep.trials", "1000", "trials per threshold", [](auto& c) -> auto& { return c.trials; });
        t.push_back({"compare.models", "baseline, modified", "models compared under common random numbers",
                     [](C& c, std::string_view v) -> std::optional<std::string> {
                         std::vector<ModelKind> out;
                         for (const auto& item : split_list(v)) {
                             ModelKind k;
                             if (!parse_model_kind(item, k)) return "unknown model '" + item + "'";
                             out.push_back(k);
                         }
                         c.compare_models = std::move(out);
                         return std::nullopt;
                     },
                     [](const C& c) {
                         std::string out;
                         for (std::size_t i = 0; i < c.compare_models.size(); ++i)
                             out += (i ? ", " : "") + std::string(to_string(c.compare_models[i]));
                         return out;
                     }});

        num("agents.quality1", "1", "site 1 quality in [0,1] (assessment success probability)",
            [](auto& c) -> auto& { return c.agents.quality[0]; });
        num("agents.quality2", "1", "site 2 quality in [0,1]", [](auto& c) -> auto& { return c.agents.quality[1]; });
        cnt("agents.replicates", "1", "agent runs per invocation", [](auto& c) -> auto& { return c.agent_replicates; });

        num("drift.x2", "42", "pinned total axis x2 = (y1 + y2)/sqrt2", [](auto& c) -> auto& { return c.drift.x2; });
        num("drift.x1_min", "-40", "difference axis grid start", [](auto& c) -> auto& { return c.drift.x1_min; });
        num("drift.x1_max", "40", "difference axis grid end", [](auto& c) -> auto& { return c.drift.x1_max; });
        cnt("drift.x1_points", "161", "grid size", [](auto& c) -> auto& { return c.drift.x1_points; });
        cnt("drift.replicates", "200", "noise draws per grid point",
            [](auto& c) -> auto& { return c.drift.replicates; });

        t.push_back({"fit.target", "hard_step", "hard_step | sigmoid (transport probability to fit)",
                     [](C& c, std::string_view v) -> std::optional<std::string> {
                         if (!parse_step_target(v, c.fit.target) || c.fit.target == StepTarget::Kind::constant)
                             return "unknown fit target '" + std::string(v) + "'";
                         return std::nullopt;
                     },
                     [](const C& c) { return std::string(to_string(c.fit.target)); }});
        t.push_back({"fit.degree", "5", "polynomial degree",
                     [](C& c, std::string_view v) -> std::optional<std::string> {
                         auto d = to_uint(v);
                         if (!d || *d > 30) return "expected a small nonnegative integer, got '" + std::string(v) + "'";
                         c.fit.degree = static_cast<int>(*d);
                         return std::nullopt;
                     },
                     [](const C& c) { return std::to_string(c.fit.degree); }});
        cnt("fit.grid_points", "101", "uniform grid size on [0,1]", [](auto& c) -> auto& { return c.fit.grid_points; });

        t.push_back({"output.dir", "out", "output directory",
                     [](C& c, std::string_view v) -> std::optional<std::string> {
                         c.output_dir = std::string(v);
                         return std::nullopt;
                     },
                     [](const C& c) { return c.output_dir; }});
        return t;
    }();
    return table;
}

inline const FieldSpec* find_field(std::string_view key) {
    for (const auto& f : field_table())
        if (f.key == key) return &f;
    return nullptr;
}

/// Constraint violations as "field.path: message".
inline std::vector<std::string> validate_config(const ExperimentConfig& c) {
    std::vector<std::string> out;
    for (const auto& v : c.params.violations()) out.push_back("params." + v.field + ": " + v.message);
    if (!(c.integrator.dt > 0.0) || !std::isfinite(c.integrator.dt)) out.push_back("integrator.dt: must be positive");
    if (!(c.integrator.t_max >= c.integrator.dt) || !std::isfinite(c.integrator.t_max))
        out.push_back("integrator.t_max: must be at least integrator.dt");
    if (!(c.theta > 0.0 && c.theta <= 1.0)) out.push_back("decision.theta: must lie in (0,1]");
    if (c.hold && !(*c.hold >= 0.0)) out.push_back("decision.hold: must be nonnegative");
    for (std::size_t i = 0; i < c.thetas.size(); ++i) {
        if (!(c.thetas[i] > 0.0 && c.thetas[i] <= 1.0))
            out.push_back("sweep.thetas: value " + config_detail::format_double(c.thetas[i]) + " outside (0,1]");
        if (i > 0 && !(c.thetas[i] > c.thetas[i - 1])) {
            out.push_back("sweep.thetas: list not ascending");
            break;
        }
    }
    if (c.trials == 0) out.push_back("sweep.trials: must be at least 1");
    if (c.compare_models.empty()) out.push_back("compare.models: needs at least one model");
    for (int i = 0; i < 2; ++i) {
        const double q = c.agents.quality[i];
        if (!(q >= 0.0 && q <= 1.0))
            out.push_back("agents.quality" + std::to_string(i + 1) + ": must lie in [0,1]");
    }
    if (c.agent_replicates == 0) out.push_back("agents.replicates: must be at least 1");
    if (c.drift.x1_points == 0) out.push_back("drift.x1_points: must be at least 1");
    if (c.drift.replicates == 0) out.push_back("drift.replicates: must be at least 1");
    if (c.fit.degree < 1) out.push_back("fit.degree: must be at least 1");
    if (c.fit.grid_points <= static_cast<std::size_t>(c.fit.degree) + 1)
        out.push_back("fit.grid_points: must exceed fit.degree + 1");
    if (c.output_dir.empty()) out.push_back("output.dir: must not be empty");
    return out;
}

struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line = 0; // 0 for command-line overrides
};

inline std::vector<KeyValue> read_key_values(std::string_view text, std::vector<std::string>& problems) {
    std::vector<KeyValue> out;
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = config_detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
            continue;
        }
        out.push_back({config_detail::trim(line.substr(0, eq)), config_detail::trim(line.substr(eq + 1)), line_no});
    }
    return out;
}

inline KeyValue parse_override(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError({"override '" + std::string(text) + "': expected key=value"});
    return {config_detail::trim(text.substr(0, eq)), config_detail::trim(text.substr(eq + 1)), 0};
}

/// Defaults from the field table.
inline ExperimentConfig default_config() {
    ExperimentConfig c;
    for (const auto& f : field_table()) {
        if (auto err = f.set(c, f.default_value)) throw std::logic_error("bad default for " + f.key + ": " + *err);
    }
    return c;
}

/// Parses `text` (plus overrides, applied after the file) into a validated
/// config. Every problem is reported, not just the first.
inline ExperimentConfig parse_config(std::string_view text, const std::vector<KeyValue>& overrides = {}) {
    std::vector<std::string> problems;
    ExperimentConfig c = default_config();
    auto entries = read_key_values(text, problems);
    std::map<std::string, std::size_t> seen;
    for (const auto& kv : entries) {
        const std::string where = "line " + std::to_string(kv.line);
        if (auto [it, fresh] = seen.emplace(kv.key, kv.line); !fresh) {
            problems.push_back(where + ": duplicate key '" + kv.key + "' (first on line " + std::to_string(it->second) +
                               ")");
            continue;
        }
        const FieldSpec* f = find_field(kv.key);
        if (!f) {
            problems.push_back(where + ": unknown key '" + kv.key + "'");
            continue;
        }
        if (auto err = f->set(c, kv.value)) problems.push_back(where + ": " + kv.key + ": " + *err);
    }
    for (const auto& kv : overrides) {
        const FieldSpec* f = find_field(kv.key);
        if (!f) {
            problems.push_back("override: unknown key '" + kv.key + "'");
            continue;
        }
        if (auto err = f->set(c, kv.value)) problems.push_back("override: " + kv.key + ": " + *err);
    }
    if (problems.empty()) problems = validate_config(c);
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return c;
}

/// Every key in table order; parse_config(render_config(c)) == c.
inline std::string render_config(const ExperimentConfig& c) {
    std::string out;
    for (const auto& f : field_table()) out += f.key + " = " + f.get(c) + "\n";
    return out;
}

/// Key-sorted rendering used for hashing; independent of input field order.
/// The output directory is left out so the same experiment hashes the same
/// wherever it is written.
inline std::string canonical_config(const ExperimentConfig& c) {
    std::vector<std::pair<std::string, std::string>> kv;
    for (const auto& f : field_table())
        if (f.key != "output.dir") kv.emplace_back(f.key, f.get(c));
    std::sort(kv.begin(), kv.end());
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

/// 64-bit FNV-1a of the canonical rendering, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_config(c)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Table of keys and defaults, for --help and the README.
inline std::string defaults_help() {
    std::ostringstream os;
    os << "Config keys (defaults):\n";
    for (const auto& f : field_table()) {
        os << "  " << f.key << " = " << (f.default_value.empty() ? "(empty)" : f.default_value) << "\n      "
           << f.help << "\n";
    }
    return os.str();
}

} // namespace antcdm
