#include "fracsource/inverse_x.hpp"

#include "fracsource/errors.hpp"
#include "fracsource/fracops.hpp"
#include "fracsource/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracsource {

namespace {

void require_rho_near_final_time(const TimeSeries& rho) {
    const std::size_t n = rho.grid().n_steps();
    double m = 0.0;
    for (std::size_t k = n - n / 4; k <= n; ++k) m = std::max(m, std::abs(rho[k]));
    if (m == 0.0) throw DegenerateRho("rho vanishes on the last quarter of the time grid");
}

std::vector<double> modal_responses(const Domain1D& d, const TimeSeries& rho, FractionalOrder alpha) {
    std::vector<double> b(d.n_modes());
    parallel_for(b.size(), [&](std::size_t i) { b[i] = modal_response(d.eigenvalue(i + 1), rho, alpha); });
    return b;
}

double trapezoid(const TimeSeries& f) {
    const std::size_t n = f.grid().n_steps();
    double acc = 0.5 * (f[0] + f[n]);
    for (std::size_t k = 1; k < n; ++k) acc += f[k];
    return acc * f.grid().step();
}

double final_residual(const std::vector<double>& b, const SpectralField& u, const std::vector<double>& g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = b[i] * g[i] - u.coeff(i + 1);
        acc += r * r;
    }
    return std::sqrt(acc);
}

// Everything the thresholding iteration reuses: per-mode responses to rho, the
// basis on the observation nodes, and the quadrature weights.
class InteriorOperator {
public:
    explicit InteriorOperator(const XSourceInteriorProblem& p)
        : p_(p), solver_(p.domain, p.rho.grid(), p.alpha) {
        const Domain1D& d = p.domain;
        const InteriorObservation& obs = p.observed;
        const std::size_t steps = p.rho.grid().size();
        if (obs.values.size() != obs.nodes.size() * steps) {
            throw InvalidArgument("observed data do not match the time grid");
        }
        if (obs.mesh_intervals % 2 != 0 || obs.mesh_intervals < 2 * d.n_modes() + 2) {
            throw InvalidArgument("observation mesh too coarse for the number of modes");
        }
        const std::vector<double> x = uniform_mesh(d.length(), obs.mesh_intervals);
        const std::vector<double> w = simpson_weights(d.length(), obs.mesh_intervals);
        for (std::size_t j : obs.nodes) {
            if (j >= x.size()) throw InvalidArgument("observation node outside the mesh");
            weights_.push_back(w[j]);
            for (std::size_t n = 1; n <= d.n_modes(); ++n) basis_.push_back(d.eigenfunction(n, x[j]));
        }
        response_.assign(d.n_modes() * steps, 0.0);
        parallel_for(d.n_modes(), [&](std::size_t i) {
            const TimeSeries r = convolve(solver_.source_weights(i + 1), p.rho);
            std::copy(r.values().begin(), r.values().end(), response_.begin() + i * steps);
        });
    }

    // chi_omega u(g) - data on the observation nodes (row-major node x time)
    std::vector<double> residual(const SpectralField& g, bool with_data) const {
        const std::size_t N = p_.domain.n_modes();
        const std::size_t steps = p_.rho.grid().size();
        const std::size_t J = weights_.size();
        std::vector<double> r(J * steps, 0.0);
        for (std::size_t j = 0; j < J; ++j) {
            double* row = r.data() + j * steps;
            for (std::size_t n = 0; n < N; ++n) {
                const double c = basis_[j * N + n] * g.coeff(n + 1);
                if (c == 0.0) continue;
                const double* resp = response_.data() + n * steps;
                for (std::size_t k = 0; k < steps; ++k) row[k] += c * resp[k];
            }
            if (with_data) {
                const double* obs = p_.observed.values.data() + j * steps;
                for (std::size_t k = 0; k < steps; ++k) row[k] -= obs[k];
            }
        }
        return r;
    }

    double norm(const std::vector<double>& r) const {
        const std::size_t steps = p_.rho.grid().size();
        const double tau = p_.rho.grid().step();
        double acc = 0.0;
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            for (std::size_t k = 0; k < steps; ++k) {
                const double c = (k == 0 || k + 1 == steps) ? 0.5 * tau : tau;
                acc += weights_[j] * c * r[j * steps + k] * r[j * steps + k];
            }
        }
        return std::sqrt(acc);
    }

    // int_0^T rho z dt with z the backward solution driven by the projected residual
    SpectralField gradient(const std::vector<double>& r) const {
        const Domain1D& d = p_.domain;
        const std::size_t N = d.n_modes();
        const std::size_t steps = p_.rho.grid().size();
        std::vector<double> rhs(N * steps, 0.0);
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            for (std::size_t n = 0; n < N; ++n) {
                const double c = weights_[j] * basis_[j * N + n];
                for (std::size_t k = 0; k < steps; ++k) rhs[n * steps + k] += c * r[j * steps + k];
            }
        }
        const EvolutionField z = solver_.backward_adjoint(EvolutionField(d, p_.rho.grid(), std::move(rhs)));
        std::vector<double> out(N);
        for (std::size_t n = 1; n <= N; ++n) {
            TimeSeries prod = z.mode_series(n);
            for (std::size_t k = 0; k < steps; ++k) prod[k] *= p_.rho[k];
            out[n - 1] = trapezoid(prod);
        }
        return SpectralField(d, std::move(out));
    }

private:
    const XSourceInteriorProblem& p_;
    ForwardSolver solver_;
    std::vector<double> weights_;
    std::vector<double> basis_;     // node x mode
    std::vector<double> response_;  // mode x time
};

}  // namespace

double modal_response(double lambda, const TimeSeries& rho, FractionalOrder alpha) {
    if (!(lambda >= 0.0)) throw InvalidArgument("eigenvalue must be >= 0");
    const MittagLefflerKernel kernel(alpha.value(), alpha.value());
    return convolve_final(kernel.weights(lambda, rho.grid()), rho);
}

ReconstructionReport<SpectralField> reconstruct_final(const XSourceFinalProblem& p) {
    if (!(p.cutoff >= 0.0)) throw InvalidArgument("mode cutoff must be >= 0");
    if (p.tikhonov && !(*p.tikhonov >= 0.0)) throw InvalidArgument("Tikhonov weight must be >= 0");
    if (!(p.noise_level >= 0.0)) throw InvalidArgument("noise level must be >= 0");
    require_rho_near_final_time(p.rho);
    const Domain1D& d = p.final_data.domain();
    const std::size_t N = d.n_modes();
    const std::vector<double> b = modal_responses(d, p.rho, p.alpha);
    std::vector<bool> keep(N);
    std::size_t retained = 0;
    for (std::size_t i = 0; i < N; ++i) {
        keep[i] = std::abs(b[i]) >= p.cutoff && b[i] != 0.0;
        retained += keep[i] ? 1 : 0;
    }
    if (retained == 0) throw AllModesCut("every |B_n| is below the cutoff " + short_number(p.cutoff));

    auto solve = [&](double mu) {
        std::vector<double> g(N, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            if (keep[i]) g[i] = b[i] * p.final_data.coeff(i + 1) / (b[i] * b[i] + mu);
        }
        return g;
    };

    double mu = 1e-10;
    if (p.tikhonov) {
        mu = *p.tikhonov;
    } else if (p.noise_level > 0.0) {
        // discrepancy principle: residual(mu) increases with mu; match the expected
        // L2 norm of uniform noise, level * max|u| * sqrt(L / 3)
        double umax = 0.0;
        for (double v : synthesize(p.final_data, uniform_mesh(d.length(), 8 * N))) umax = std::max(umax, std::abs(v));
        const double target = p.noise_level * umax * std::sqrt(d.length() / 3.0);
        double lo = -30.0;
        double hi = 2.0 * std::log10(std::max(*std::max_element(b.begin(), b.end()), 1e-300)) + 4.0;
        if (final_residual(b, p.final_data, solve(std::pow(10.0, lo))) >= target) {
            mu = std::pow(10.0, lo);
        } else {
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (final_residual(b, p.final_data, solve(std::pow(10.0, mid))) < target ? lo : hi) = mid;
            }
            mu = std::pow(10.0, 0.5 * (lo + hi));
        }
    }

    std::vector<double> g = solve(mu);
    const double discrepancy = final_residual(b, p.final_data, g);
    ReconstructionReport<SpectralField> report(SpectralField(d, std::move(g)));
    report.iterations = 1;
    report.residual_history.push_back(discrepancy);
    report.diagnostics.emplace_back("mu", mu);
    report.diagnostics.emplace_back("retained_modes", static_cast<double>(retained));
    report.diagnostics.emplace_back("discrepancy", discrepancy);
    return report;
}

double holder_ratio(const SpectralField& g, const TimeSeries& rho, FractionalOrder alpha, double gamma) {
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    const double gl2 = g.l2_norm();
    if (gl2 == 0.0) throw InvalidArgument("Holder ratio needs g != 0");
    const std::vector<double> b = modal_responses(g.domain(), rho, alpha);
    double u2 = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) u2 += std::pow(b[i] * g.coeff(i + 1), 2);
    const double e = sobolev_norm(g, gamma);
    return gl2 / (std::pow(e, 1.0 / (gamma + 1.0)) * std::pow(std::sqrt(u2), gamma / (gamma + 1.0)));
}

InteriorObservation observe_interior(const EvolutionField& u, double a, double b, std::size_t mesh_intervals) {
    const Domain1D& d = u.domain();
    if (!(0.0 < a && a < b && b < d.length())) throw InvalidArgument("omega must satisfy 0 < a < b < L");
    if (mesh_intervals % 2 != 0 || mesh_intervals < 2 * d.n_modes() + 2) {
        throw InvalidArgument("observation mesh needs an even interval count >= 2N + 2");
    }
    const std::vector<double> x = uniform_mesh(d.length(), mesh_intervals);
    InteriorObservation obs{a, b, mesh_intervals, {}, {}};
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] >= a && x[j] <= b) obs.nodes.push_back(j);
    }
    if (obs.nodes.empty()) throw InvalidArgument("omega contains no mesh node");
    const std::size_t steps = u.grid().size();
    obs.values.assign(obs.nodes.size() * steps, 0.0);
    for (std::size_t jj = 0; jj < obs.nodes.size(); ++jj) {
        const double xj = x[obs.nodes[jj]];
        for (std::size_t n = 1; n <= d.n_modes(); ++n) {
            const double phi = d.eigenfunction(n, xj);
            for (std::size_t k = 0; k < steps; ++k) obs.values[jj * steps + k] += phi * u.value(n, k);
        }
    }
    return obs;
}

ReconstructionReport<SpectralField> iterative_thresholding(const XSourceInteriorProblem& p,
                                                           const std::optional<SpectralField>& truth) {
    if (!(p.K > 0.0) || !(p.beta > 0.0)) throw NonPositiveParams("thresholding needs K > 0 and beta > 0");
    if (p.m_max < 1) throw InvalidArgument("thresholding needs m_max >= 1");
    if (p.rho[0] == 0.0) throw DegenerateRho("interior-data uniqueness needs rho(0) != 0");
    if (truth && !(truth->domain() == p.domain)) throw InvalidArgument("truth lives on a different domain");
    const InteriorOperator op(p);

    ReconstructionReport<SpectralField> report(SpectralField::zero(p.domain));
    report.converged = false;
    report.diagnostics.emplace_back("K", p.K);
    report.diagnostics.emplace_back("beta", p.beta);
    SpectralField& g = report.value;
    const double damp = p.K / (p.K + p.beta);
    std::size_t growth = 0;
    double residual = 0.0;
    for (std::size_t m = 1; m <= p.m_max; ++m) {
        const std::vector<double> r = op.residual(g, true);
        residual = op.norm(r);
        report.residual_history.push_back(residual);
        const auto& h = report.residual_history;
        const bool grew = h.size() >= 2 && h[h.size() - 1] > h[h.size() - 2] * (1.0 + 1e-12);
        growth = grew ? growth + 1 : 0;
        if (growth >= 3) throw Divergence("data residual grew for three consecutive iterations; K is too small");

        SpectralField next = damp * g - (1.0 / (p.K + p.beta)) * op.gradient(r);
        const double step = (next - g).l2_norm();
        g = std::move(next);
        report.iterations = m;
        report.step_history.push_back(step);
        if (truth) {
            const double tn = truth->l2_norm();
            report.error_history.push_back(tn == 0.0 ? (g - *truth).l2_norm() : (g - *truth).l2_norm() / tn);
        }
        if (step <= p.tol * g.l2_norm()) {
            report.converged = true;
            break;
        }
    }
    report.diagnostics.emplace_back("residual", op.norm(op.residual(g, true)));
    return report;
}

double estimate_k(const XSourceInteriorProblem& p, std::size_t iters) {
    if (iters < 5) throw InvalidArgument("estimate_k needs at least 5 power iterations");
    const InteriorOperator op(p);
    const std::size_t N = p.domain.n_modes();
    std::vector<double> start(N);
    for (std::size_t i = 0; i < N; ++i) start[i] = 1.0 / static_cast<double>(i + 1);
    SpectralField g(p.domain, std::move(start));
    g *= 1.0 / g.l2_norm();
    double estimate = 0.0;
    for (std::size_t it = 0; it < iters; ++it) {
        SpectralField next = op.gradient(op.residual(g, false));
        estimate = next.l2_norm();
        if (estimate == 0.0) return 0.0;
        g = (1.0 / estimate) * std::move(next);
    }
    return estimate;
}

}  // namespace fracsource
