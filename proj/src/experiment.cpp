#include "fracsource/experiment.hpp"

#include "fracsource/errors.hpp"
#include "fracsource/forward.hpp"
#include "fracsource/fracops.hpp"
#include "fracsource/gamma.hpp"
#include "fracsource/inverse_t.hpp"
#include "fracsource/inverse_x.hpp"
#include "fracsource/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

namespace fracsource {

namespace {

using nlohmann::json;

const std::vector<std::string> kModes{"forward",        "invert-rho-volterra", "invert-rho-fixedpoint",
                                      "invert-g-final", "invert-g-interior",   "ml-eval",
                                      "sweep"};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- config reading ----

class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigValidationError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    bool has(const std::string& k) const {
        seen_.insert(k);
        return node_.contains(k) && !node_.at(k).is_null();
    }

    Reader child(const std::string& k) const {
        seen_.insert(k);
        static const json empty = json::object();
        return Reader(node_.contains(k) ? node_.at(k) : empty, key(k));
    }

    double number(const std::string& k, double fallback) const {
        if (!has(k)) return fallback;
        const json& v = node_.at(k);
        if (!v.is_number()) throw ConfigValidationError(key(k), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigValidationError(key(k), "must be finite");
        return d;
    }

    std::optional<double> optional_number(const std::string& k) const {
        if (!has(k)) return std::nullopt;
        return number(k, 0.0);
    }

    std::size_t count(const std::string& k, std::size_t fallback) const {
        if (!has(k)) return fallback;
        const json& v = node_.at(k);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ConfigValidationError(key(k), "expected a nonnegative integer");
        }
        return v.get<std::size_t>();
    }

    std::string text(const std::string& k, const std::string& fallback) const {
        if (!has(k)) return fallback;
        const json& v = node_.at(k);
        if (!v.is_string()) throw ConfigValidationError(key(k), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& k, const std::vector<double>& fallback) const {
        if (!has(k)) return fallback;
        const json& v = node_.at(k);
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) throw ConfigValidationError(key(k), "expected a number or an array of numbers");
        std::vector<double> out;
        for (const json& e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) {
                throw ConfigValidationError(key(k), "expected finite numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    // Unknown keys are almost always typos; reject them.
    void finish() const {
        for (const auto& [k, v] : node_.items()) {
            if (!seen_.count(k)) throw ConfigValidationError(key(k), "unknown key");
        }
    }

private:
    const json& node_;
    std::string path_;
    mutable std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigValidationError(key, what);
}

// ---- shared pieces of the modes ----

struct Setup {
    Domain1D domain;
    TimeGrid grid;
    FractionalOrder alpha;
    SpectralField g;
    TimeSeries rho;
};

Setup make_setup(const ExperimentConfig& c, std::size_t n_steps) {
    const Domain1D domain(c.L, c.N);
    const TimeGrid grid(c.T, n_steps);
    return Setup{domain, grid, FractionalOrder(c.alpha), make_g(c.g, domain), make_rho(c.rho, grid)};
}

std::size_t mesh_of(const ExperimentConfig& c) { return c.mesh_intervals == 0 ? 8 * c.N : c.mesh_intervals; }

TimeSeries synthetic_trace(const Setup& s, double x0) {
    const ForwardSolver solver(s.domain, s.grid, s.alpha);
    return observe_point(solver.inhomogeneous(s.g, s.rho), x0);
}

double relative_field_error(const SpectralField& approx, const SpectralField& exact) {
    const double n = exact.l2_norm();
    const double d = (approx - exact).l2_norm();
    return n == 0.0 ? d : d / n;
}

ResultTable field_table(const ExperimentConfig& c, const SpectralField& truth, const SpectralField& rec) {
    const std::vector<double> x = uniform_mesh(c.L, mesh_of(c));
    const std::vector<double> a = synthesize(truth, x);
    const std::vector<double> b = synthesize(rec, x);
    ResultTable t{"field", {"x", "g_true", "g_rec"}, {}};
    for (std::size_t j = 0; j < x.size(); ++j) t.rows.push_back({x[j], a[j], b[j]});
    return t;
}

TSourceProblem t_problem(const ExperimentConfig& c, const Setup& s, double x0) {
    TSourceProblem p{s.g, x0, s.alpha, add_noise(synthetic_trace(s, x0), c.noise_level, c.seed)};
    p.noise_level = c.noise_level;
    p.point_tolerance = c.solver.point_tolerance;
    p.smoothing_width = c.solver.smoothing_width;
    return p;
}

// ---- modes ----

ResultSet run_forward(const ExperimentConfig& c) {
    const Setup s = make_setup(c, c.n_steps);
    const ForwardSolver solver(s.domain, s.grid, s.alpha);
    const EvolutionField u = solver.inhomogeneous(s.g, s.rho);
    const TimeSeries trace = observe_point(u, c.x0);
    ResultSet r;
    r.summary = {{"mode", c.mode},
                 {"alpha", num(c.alpha)},
                 {"x0", num(c.x0)},
                 {"u_T_l2", num(u.at_time(s.grid.n_steps()).l2_norm())},
                 {"trace_max_abs", num(trace.max_abs())},
                 {"duhamel_residual", num(duhamel_residual(s.g, s.rho, s.alpha))}};
    ResultTable main{"trace", {"t", "rho", "u_x0"}, {}};
    for (std::size_t k = 0; k < s.grid.size(); ++k) main.rows.push_back({s.grid.node(k), s.rho[k], trace[k]});
    const std::vector<double> x = uniform_mesh(c.L, mesh_of(c));
    const std::vector<double> uT = synthesize(u.at_time(s.grid.n_steps()), x);
    ResultTable fin{"final", {"x", "u_T"}, {}};
    for (std::size_t j = 0; j < x.size(); ++j) fin.rows.push_back({x[j], uT[j]});
    r.tables = {std::move(main), std::move(fin)};
    return r;
}

ResultSet run_volterra(const ExperimentConfig& c) {
    const Setup s = make_setup(c, c.n_steps);
    const TSourceProblem p = t_problem(c, s, c.x0);
    const auto rep = solve_volterra(p);
    const auto diag = count_sign_changes(rep.value, 1e-8 * rep.value.max_abs());
    ResultSet r;
    r.summary = {{"mode", c.mode},
                 {"alpha", num(c.alpha)},
                 {"n_steps", std::to_string(c.n_steps)},
                 {"x0", num(c.x0)},
                 {"noise_level", num(c.noise_level)},
                 {"seed", std::to_string(c.seed)},
                 {"rel_l2_error", num(relative_l2_error(rep.value, s.rho))},
                 {"data_residual", num(rep.residual_history.front())},
                 {"g_x0", num(*rep.diagnostic("g_x0"))},
                 {"sign_changes", std::to_string(diag.sign_changes)},
                 {"c1_bound", num(diag.c1_bound)}};
    ResultTable main{"rho", {"t", "rho_true", "rho_rec", "trace"}, {}};
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
        main.rows.push_back({s.grid.node(k), s.rho[k], rep.value[k], p.trace[k]});
    }
    r.tables = {std::move(main)};
    return r;
}

ResultSet run_fixed_point(const ExperimentConfig& c) {
    const Setup s = make_setup(c, c.n_steps);
    const TSourceProblem p = t_problem(c, s, c.x0);
    const double bound = fixed_point_bound(s.g, c.x0, s.alpha, s.grid);
    const double K = c.solver.K.value_or(bound);
    const auto rep = fixed_point_iterate(p, K, c.solver.m_max, c.solver.tol, s.rho);
    ResultSet r;
    r.summary = {{"mode", c.mode},
                 {"alpha", num(c.alpha)},
                 {"n_steps", std::to_string(c.n_steps)},
                 {"K", num(K)},
                 {"K_bound", num(bound)},
                 {"iterations", std::to_string(rep.iterations)},
                 {"converged", rep.converged ? "1" : "0"},
                 {"rel_l2_error", num(relative_l2_error(rep.value, s.rho))}};
    ResultTable main{"rho", {"t", "rho_true", "rho_rec"}, {}};
    for (std::size_t k = 0; k < s.grid.size(); ++k) main.rows.push_back({s.grid.node(k), s.rho[k], rep.value[k]});
    ResultTable hist{"history", {"iteration", "step", "residual", "error"}, {}};
    for (std::size_t m = 0; m < rep.step_history.size(); ++m) {
        hist.rows.push_back({static_cast<double>(m + 1), rep.step_history[m], rep.residual_history[m],
                             rep.error_history[m]});
    }
    r.tables = {std::move(main), std::move(hist)};
    return r;
}

ResultSet run_final(const ExperimentConfig& c) {
    const Setup s = make_setup(c, c.n_steps);
    const ForwardSolver solver(s.domain, s.grid, s.alpha);
    SpectralField uT = solver.inhomogeneous(s.g, s.rho).at_time(s.grid.n_steps());
    if (c.noise_level > 0.0) {
        const std::size_t m = mesh_of(c);
        uT = project(add_noise(synthesize(uT, uniform_mesh(c.L, m)), c.noise_level, c.seed), s.domain);
    }
    const XSourceFinalProblem p{s.rho, s.alpha, uT, c.solver.delta, c.solver.mu, c.noise_level};
    const auto rep = reconstruct_final(p);
    ResultSet r;
    r.summary = {{"mode", c.mode},
                 {"alpha", num(c.alpha)},
                 {"noise_level", num(c.noise_level)},
                 {"rel_l2_error", num(relative_field_error(rep.value, s.g))},
                 {"mu", num(*rep.diagnostic("mu"))},
                 {"retained_modes", num(*rep.diagnostic("retained_modes"))},
                 {"discrepancy", num(*rep.diagnostic("discrepancy"))}};
    if (s.g.l2_norm() > 0.0) r.summary.emplace_back("holder_ratio", num(holder_ratio(s.g, s.rho, s.alpha, c.solver.gamma)));
    ResultTable modes{"modes", {"n", "B_n", "g_true_n", "g_rec_n"}, {}};
    for (std::size_t n = 1; n <= c.N; ++n) {
        modes.rows.push_back({static_cast<double>(n), modal_response(s.domain.eigenvalue(n), s.rho, s.alpha),
                              s.g.coeff(n), rep.value.coeff(n)});
    }
    r.tables = {field_table(c, s.g, rep.value), std::move(modes)};
    return r;
}

ResultSet run_interior(const ExperimentConfig& c) {
    const Setup s = make_setup(c, c.n_steps);
    const ForwardSolver solver(s.domain, s.grid, s.alpha);
    InteriorObservation obs = observe_interior(solver.inhomogeneous(s.g, s.rho), c.omega_a, c.omega_b, mesh_of(c));
    obs.values = add_noise(obs.values, c.noise_level, c.seed);
    XSourceInteriorProblem p{s.domain, s.rho, s.alpha, std::move(obs)};
    p.beta = c.solver.beta;
    p.m_max = c.solver.m_max;
    p.tol = c.solver.tol;
    p.K = c.solver.K ? *c.solver.K : 1.1 * estimate_k(p, 30);
    const auto rep = iterative_thresholding(p, s.g);
    ResultSet r;
    r.summary = {{"mode", c.mode},
                 {"alpha", num(c.alpha)},
                 {"omega_a", num(c.omega_a)},
                 {"omega_b", num(c.omega_b)},
                 {"K", num(p.K)},
                 {"beta", num(p.beta)},
                 {"iterations", std::to_string(rep.iterations)},
                 {"converged", rep.converged ? "1" : "0"},
                 {"rel_l2_error", num(relative_field_error(rep.value, s.g))},
                 {"residual", num(*rep.diagnostic("residual"))}};
    ResultTable hist{"history", {"iteration", "residual", "step", "error"}, {}};
    for (std::size_t m = 0; m < rep.step_history.size(); ++m) {
        hist.rows.push_back({static_cast<double>(m + 1), rep.residual_history[m], rep.step_history[m],
                             rep.error_history[m]});
    }
    r.tables = {field_table(c, s.g, rep.value), std::move(hist)};
    return r;
}

ResultSet run_ml(const ExperimentConfig& c) {
    const MittagLeffler e(MLParams(c.ml_alpha, c.ml_beta));
    ResultSet r;
    r.summary = {{"mode", c.mode}, {"alpha", num(c.ml_alpha)}, {"beta", num(c.ml_beta)}};
    ResultTable t{"ml", {"z", "value"}, {}};
    for (double z : c.ml_z) t.rows.push_back({z, e(z)});
    r.tables = {std::move(t)};
    return r;
}

ResultSet run_sweep(const ExperimentConfig& c) {
    const SweepParams& sw = c.sweep;
    ResultSet r;
    r.summary = {{"mode", c.mode}, {"target", sw.target}, {"alpha", num(c.alpha)}};
    if (sw.target == "x0-distance") {
        const Setup s = make_setup(c, c.n_steps);
        ResultTable t{"sweep", {"x0", "distance", "g_x0", "rel_l2_error"}, {}};
        for (double x0 : sw.x0) {
            const double a = c.g.a * c.L;
            const double b = c.g.b * c.L;
            const double dist = x0 < a ? a - x0 : (x0 > b ? x0 - b : 0.0);
            double err = std::numeric_limits<double>::quiet_NaN();
            try {
                err = relative_l2_error(solve_volterra(t_problem(c, s, x0)).value, s.rho);
            } catch (const PointDegenerate&) {
                // reported as NaN: |g(x0)| below the point tolerance
            }
            t.rows.push_back({x0, dist, eval_at(s.g, x0), err});
        }
        r.tables = {std::move(t)};
        return r;
    }
    ResultTable t{"sweep", {"n_steps", "error", "slope"}, {}};
    for (std::size_t n : sw.n_steps) {
        double err = 0.0;
        if (sw.target == "caputo_l1") {
            const TimeGrid grid(c.T, n);
            const auto f = TimeSeries::sample(grid, [](double x) { return x * x; });
            const auto exact = TimeSeries::sample(grid, [&](double x) {
                return 2.0 * std::pow(x, 2.0 - c.alpha) / gamma_fn(3.0 - c.alpha);
            });
            err = (caputo_l1(f, FractionalOrder(c.alpha)) - exact).max_abs();
        } else if (sw.target == "volterra") {
            const Setup s = make_setup(c, n);
            err = relative_l2_error(solve_volterra(t_problem(c, s, c.x0)).value, s.rho);
        } else {
            const Setup s = make_setup(c, n);
            err = duhamel_residual(s.g, s.rho, s.alpha);
        }
        double slope = std::numeric_limits<double>::quiet_NaN();
        if (!t.rows.empty()) {
            const auto& prev = t.rows.back();
            slope = std::log(prev[1] / err) / std::log(static_cast<double>(n) / prev[0]);
        }
        t.rows.push_back({static_cast<double>(n), err, slope});
    }
    r.tables = {std::move(t)};
    return r;
}

}  // namespace

void apply_override(nlohmann::json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigParseError("override '" + assignment + "' is not of the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    if (!doc.is_object()) throw ConfigParseError("config root must be an object");
    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigParseError("override key '" + key + "' has an empty component");
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        json& next = (*node)[part];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) throw ConfigParseError("override key '" + key + "' descends into a non-object");
        node = &next;
        start = dot + 1;
    }
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
    const Reader root(doc, "");
    ExperimentConfig c;
    c.mode = root.text("mode", "");
    require(std::find(kModes.begin(), kModes.end(), c.mode) != kModes.end(), "mode",
            "expected one of forward, invert-rho-volterra, invert-rho-fixedpoint, invert-g-final, "
            "invert-g-interior, ml-eval, sweep");

    const Reader domain = root.child("domain");
    c.L = domain.number("L", c.L);
    require(c.L > 0.0, domain.key("L"), "must be > 0");
    c.N = domain.count("N", c.N);
    require(c.N >= 1, domain.key("N"), "must be >= 1");
    domain.finish();

    const Reader grid = root.child("grid");
    c.T = grid.number("T", c.T);
    require(c.T > 0.0, grid.key("T"), "must be > 0");
    c.n_steps = grid.count("n_steps", c.n_steps);
    require(c.n_steps >= 3, grid.key("n_steps"), "must be >= 3");
    grid.finish();

    c.alpha = root.number("alpha", c.alpha);
    require(c.alpha > 0.0 && c.alpha < 1.0, "alpha", "must lie in (0, 1)");

    const Reader source = root.child("source");
    const Reader g = source.child("g");
    c.g.kind = g.text("kind", c.g.kind);
    const auto& gk = g_profile_kinds();
    require(std::find(gk.begin(), gk.end(), c.g.kind) != gk.end(), g.key("kind"),
            "expected mode, sine-bump, hat or offset-bump");
    c.g.mode = g.count("mode", c.g.mode);
    require(c.g.mode >= 1 && c.g.mode <= c.N, g.key("mode"), "must lie in 1..N");
    c.g.a = g.number("a", c.g.a);
    c.g.b = g.number("b", c.g.b);
    require(c.g.a >= 0.0 && c.g.a < c.g.b, g.key("a"), "need 0 <= a < b");
    require(c.g.b <= 1.0, g.key("b"), "must be <= 1 (support is given as a fraction of L)");
    c.g.scale = g.number("scale", c.g.scale);
    g.finish();
    const Reader rho = source.child("rho");
    c.rho.kind = rho.text("kind", c.rho.kind);
    const auto& rk = rho_profile_kinds();
    require(std::find(rk.begin(), rk.end(), c.rho.kind) != rk.end(), rho.key("kind"),
            "expected constant, affine, sine or sign-alternating");
    c.rho.c0 = rho.number("c0", c.rho.c0);
    c.rho.c1 = rho.number("c1", c.rho.c1);
    c.rho.changes = rho.count("changes", c.rho.changes);
    rho.finish();
    source.finish();

    const Reader obs = root.child("observation");
    c.x0 = obs.number("x0", 0.5 * c.L);
    require(c.x0 > 0.0 && c.x0 < c.L, obs.key("x0"), "must lie strictly inside (0, L)");
    const std::vector<double> omega = obs.numbers("omega", {0.1 * c.L, 0.35 * c.L});
    require(omega.size() == 2, obs.key("omega"), "expected [a, b]");
    c.omega_a = omega[0];
    c.omega_b = omega[1];
    require(0.0 < c.omega_a && c.omega_a < c.omega_b && c.omega_b < c.L, obs.key("omega"),
            "need 0 < a < b < L");
    c.mesh_intervals = obs.count("mesh", 0);
    require(c.mesh_intervals == 0 || (c.mesh_intervals % 2 == 0 && c.mesh_intervals >= 2 * c.N + 2),
            obs.key("mesh"), "must be even and >= 2 N + 2");
    obs.finish();

    c.noise_level = root.number("noise_level", 0.0);
    require(c.noise_level >= 0.0, "noise_level", "must be >= 0");
    c.seed = root.count("seed", 1);

    const Reader solver = root.child("solver");
    c.solver.K = solver.optional_number("K");
    require(!c.solver.K || *c.solver.K > 0.0, solver.key("K"), "must be > 0");
    c.solver.beta = solver.number("beta", c.solver.beta);
    require(c.solver.beta > 0.0, solver.key("beta"), "must be > 0");
    c.solver.mu = solver.optional_number("mu");
    require(!c.solver.mu || *c.solver.mu >= 0.0, solver.key("mu"), "must be >= 0");
    c.solver.delta = solver.number("delta", c.solver.delta);
    require(c.solver.delta >= 0.0, solver.key("delta"), "must be >= 0");
    c.solver.tol = solver.number("tol", c.solver.tol);
    require(c.solver.tol >= 0.0, solver.key("tol"), "must be >= 0");
    c.solver.m_max = solver.count("m_max", c.solver.m_max);
    require(c.solver.m_max >= 1, solver.key("m_max"), "must be >= 1");
    c.solver.smoothing_width = solver.count("smoothing_width", c.solver.smoothing_width);
    require(c.solver.smoothing_width >= 1, solver.key("smoothing_width"), "must be >= 1");
    c.solver.point_tolerance = solver.number("point_tolerance", c.solver.point_tolerance);
    require(c.solver.point_tolerance >= 0.0, solver.key("point_tolerance"), "must be >= 0");
    c.solver.gamma = solver.number("gamma", c.solver.gamma);
    require(c.solver.gamma > 0.0, solver.key("gamma"), "must be > 0");
    solver.finish();

    const Reader ml = root.child("ml");
    c.ml_alpha = ml.number("alpha", c.ml_alpha);
    require(c.ml_alpha > 0.0 && c.ml_alpha < 2.0, ml.key("alpha"), "must lie in (0, 2)");
    c.ml_beta = ml.number("beta", c.ml_beta);
    require(c.ml_beta > 0.0, ml.key("beta"), "must be > 0");
    c.ml_z = ml.numbers("z", c.ml_z);
    require(!c.ml_z.empty(), ml.key("z"), "must not be empty");
    for (double z : c.ml_z) require(z <= 1.0, ml.key("z"), "arguments above 1 are not supported");
    ml.finish();

    const Reader sweep = root.child("sweep");
    c.sweep.target = sweep.text("target", c.sweep.target);
    require(c.sweep.target == "caputo_l1" || c.sweep.target == "volterra" || c.sweep.target == "duhamel" ||
                c.sweep.target == "x0-distance",
            sweep.key("target"), "expected caputo_l1, volterra, duhamel or x0-distance");
    if (sweep.has("n_steps")) {
        c.sweep.n_steps.clear();
        for (double v : sweep.numbers("n_steps", {})) {
            require(v >= 3.0 && v == std::floor(v), sweep.key("n_steps"), "entries must be integers >= 3");
            c.sweep.n_steps.push_back(static_cast<std::size_t>(v));
        }
    }
    require(!c.sweep.n_steps.empty(), sweep.key("n_steps"), "must not be empty");
    c.sweep.x0 = sweep.numbers("x0", {0.25 * c.L, 0.5 * c.L, 0.75 * c.L});
    for (double x : c.sweep.x0) require(x > 0.0 && x < c.L, sweep.key("x0"), "entries must lie in (0, L)");
    sweep.finish();

    c.output = root.text("output", c.output);
    require(!c.output.empty(), "output", "must not be empty");
    root.finish();
    return c;
}

ResultSet run_experiment(const ExperimentConfig& c) {
    if (c.mode == "forward") return run_forward(c);
    if (c.mode == "invert-rho-volterra") return run_volterra(c);
    if (c.mode == "invert-rho-fixedpoint") return run_fixed_point(c);
    if (c.mode == "invert-g-final") return run_final(c);
    if (c.mode == "invert-g-interior") return run_interior(c);
    if (c.mode == "ml-eval") return run_ml(c);
    if (c.mode == "sweep") return run_sweep(c);
    throw InvalidArgument("unknown mode '" + c.mode + "'");
}

std::string format_csv(const ResultTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + num(row[i]);
        out += '\n';
    }
    return out;
}

std::vector<std::string> write_results(const ResultSet& results, const std::string& output) {
    const std::string stem = output.size() > 4 && output.ends_with(".csv") ? output.substr(0, output.size() - 4) : output;
    std::vector<std::string> paths;
    auto write = [&](const std::string& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
        f << text;
        if (!f) throw InvalidArgument("failed writing '" + path + "'");
        paths.push_back(path);
    };
    for (std::size_t i = 0; i < results.tables.size(); ++i) {
        write(i == 0 ? output : stem + "_" + results.tables[i].name + ".csv", format_csv(results.tables[i]));
    }
    std::string summary = "key,value\n";
    for (const auto& [k, v] : results.summary) summary += k + "," + v + "\n";
    write(stem + "_summary.csv", summary);
    return paths;
}

}  // namespace fracsource
