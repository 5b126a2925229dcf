#include "fracsource/inverse_t.hpp"

#include "fracsource/errors.hpp"
#include "fracsource/forward.hpp"
#include "fracsource/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracsource {

namespace {

void require_point(const SpectralField& g, double x0, double tolerance) {
    const double L = g.domain().length();
    if (!(x0 > 0.0 && x0 < L)) throw InvalidArgument("observation point must lie strictly inside (0, L)");
    const double gx0 = eval_at(g, x0);
    if (!(std::abs(gx0) >= tolerance)) {
        throw PointDegenerate("|g(x0)| = " + short_number(std::abs(gx0)) + " is below the tolerance " +
                              short_number(tolerance));
    }
}

// Trace with node 0 checked and pinned to 0, mollified when noisy.
TimeSeries prepared_trace(const TSourceProblem& p) {
    const double scale = p.trace.max_abs();
    const double tol = (1e-12 + p.noise_level) * scale;
    if (std::abs(p.trace[0]) > tol) {
        throw NonZeroInitialTrace("trace(0) = " + short_number(p.trace[0]) + " but zero initial data require 0");
    }
    TimeSeries t = p.trace;
    t[0] = 0.0;
    if (p.noise_level > 0.0 && p.smoothing_width > 1) t = moving_average(t, p.smoothing_width);
    return t;
}

double kCorrectionLimit(double alpha) { return 2.0 - alpha + 1e-9; }

double l2_or_zero(const TimeSeries& f) { return f.l2_norm(); }

double relative_or_absolute(const TimeSeries& approx, const TimeSeries& exact) {
    const double norm = exact.l2_norm();
    if (norm == 0.0) return (approx - exact).l2_norm();
    return (approx - exact).l2_norm() / norm;
}

}  // namespace

double SingularKernel::value(std::size_t k) const {
    if (k == 0) throw InvalidArgument("Q is singular at t = 0");
    return std::pow(smooth_factor.grid().node(k), power - 1.0) * smooth_factor[k];
}

SingularKernel kernel_q(const SpectralField& g, double x0, FractionalOrder alpha, const TimeGrid& grid) {
    const Domain1D& d = g.domain();
    if (!(x0 >= 0.0 && x0 <= d.length())) throw InvalidArgument("x0 outside [0, L]");
    const MittagLeffler e(MLParams(alpha, alpha));
    std::vector<double> smooth(grid.size(), 0.0);
    for (std::size_t n = 1; n <= d.n_modes(); ++n) {
        const double c = g.coeff(n) * d.eigenfunction(n, x0);
        if (c == 0.0) continue;
        const double lambda = d.eigenvalue(n);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            smooth[k] += lambda * c * e(-lambda * std::pow(grid.node(k), alpha.value()));
        }
    }
    return SingularKernel{alpha.value(), TimeSeries(grid, std::move(smooth))};
}

PointObservation::PointObservation(const SpectralField& g, double x0, FractionalOrder alpha, const TimeGrid& grid)
    : trace_weights_(ConvolutionWeights::zeros(grid.n_steps())),
      q_weights_(ConvolutionWeights::zeros(grid.n_steps())),
      v_trace_(TimeSeries::zeros(grid)) {
    const Domain1D& d = g.domain();
    if (!(x0 > 0.0 && x0 < d.length())) throw InvalidArgument("observation point must lie strictly inside (0, L)");
    const ForwardSolver solver(d, grid, alpha);
    const MittagLeffler e2(MLParams(alpha, 2.0));
    const double tau_alpha = std::pow(grid.step(), alpha.value());
    for (std::size_t n = 1; n <= d.n_modes(); ++n) {
        const double c = g.coeff(n) * d.eigenfunction(n, x0);
        if (c == 0.0) continue;
        const double lambda = d.eigenvalue(n);
        const ConvolutionWeights& w = solver.source_weights(n);
        trace_weights_.add_scaled(w, c);
        q_weights_.add_scaled(w, c * lambda);
        diagonal_ += c * e2(-lambda * tau_alpha);
        g_x0_ += c;
        v_trace_ += c * solver.relaxation(n);
    }
}

TimeSeries PointObservation::trace(const TimeSeries& rho) const { return convolve(trace_weights_, rho); }

ReconstructionReport<TimeSeries> solve_volterra(const TSourceProblem& p) {
    require_point(p.g, p.x0, p.point_tolerance);
    const TimeGrid& grid = p.trace.grid();
    if (grid.n_steps() < 3) throw InvalidArgument("solve_volterra needs at least 3 time steps");
    const TimeSeries data = prepared_trace(p);
    const PointObservation obs(p.g, p.x0, p.alpha, grid);
    // the starting corrections amplify noise and misread mollified data, so they are for exact traces only
    const std::vector<double> sigma = p.noise_level > 0.0
                                          ? std::vector<double>{}
                                          : singular_exponents(p.alpha, kCorrectionLimit(p.alpha.value()));
    const TimeSeries d = caputo_l1(data, p.alpha, sigma);
    const auto& qL = obs.q_weights().left;
    const auto& qR = obs.q_weights().right;
    const double diag = obs.diagonal();
    const std::size_t n = grid.n_steps();
    std::vector<double> rho(n + 1, 0.0);

    // steps 1 and 2 together, with rho_0 = 2 rho_1 - rho_2
    const double a11 = diag - 2.0 * qR[0];
    const double a12 = qR[0];
    const double a21 = -qL[1] - 2.0 * qR[1] - qR[0];
    const double a22 = diag + qR[1];
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0) throw PointDegenerate("starting system of the Volterra equation is singular");
    rho[1] = (d[1] * a22 - a12 * d[2]) / det;
    rho[2] = (a11 * d[2] - a21 * d[1]) / det;
    rho[0] = 2.0 * rho[1] - rho[2];
    for (std::size_t k = 3; k <= n; ++k) {
        double acc = d[k] + qR[0] * rho[k - 1];
        for (std::size_t j = 1; j < k; ++j) acc += qL[j] * rho[k - j] + qR[j] * rho[k - j - 1];
        rho[k] = acc / diag;
    }

    ReconstructionReport<TimeSeries> report(TimeSeries(grid, std::move(rho)));
    const double data_norm = l2_or_zero(data);
    const double misfit = (obs.trace(report.value) - data).l2_norm();
    report.residual_history.push_back(data_norm == 0.0 ? misfit : misfit / data_norm);
    report.diagnostics.emplace_back("g_x0", obs.g_at_x0());
    report.diagnostics.emplace_back("diagonal", diag);
    return report;
}

double fixed_point_bound(const SpectralField& g, double x0, FractionalOrder alpha, const TimeGrid& grid) {
    return PointObservation(g, x0, alpha, grid).homogeneous_trace().max_abs();
}

ReconstructionReport<TimeSeries> fixed_point_iterate(const TSourceProblem& p, double K, std::size_t m_max,
                                                     double tol, const std::optional<TimeSeries>& truth) {
    if (!(K > 0.0)) throw NonPositiveParams("fixed-point constant K must be positive");
    if (m_max < 1) throw InvalidArgument("fixed-point iteration needs m_max >= 1");
    require_point(p.g, p.x0, p.point_tolerance);
    const TimeGrid& grid = p.trace.grid();
    const PointObservation obs(p.g, p.x0, p.alpha, grid);
    const double bound = obs.homogeneous_trace().max_abs();
    if (K < bound * (1.0 - 1e-12)) {
        throw InvalidArgument("K = " + short_number(K) + " is below max |v(x0, t)| = " + short_number(bound));
    }
    if (truth && !(truth->grid() == grid)) throw InvalidArgument("truth lives on a different grid");
    const TimeSeries data = prepared_trace(p);
    const double data_norm = l2_or_zero(data);

    ReconstructionReport<TimeSeries> report(TimeSeries::zeros(grid));
    report.converged = false;
    report.diagnostics.emplace_back("K", K);
    report.diagnostics.emplace_back("K_bound", bound);
    TimeSeries& rho = report.value;
    std::size_t growth = 0;
    for (std::size_t m = 1; m <= m_max; ++m) {
        const TimeSeries mismatch = data - obs.trace(rho);
        const double misfit = mismatch.l2_norm();
        // plain L1 here: the starting corrections destroy the contraction for small alpha
        TimeSeries next = rho + (1.0 / K) * caputo_l1(mismatch, p.alpha);
        next[0] = 2.0 * next[1] - next[2];
        const double step = (next - rho).l2_norm();
        rho = std::move(next);
        report.iterations = m;
        report.step_history.push_back(step);
        report.residual_history.push_back(data_norm == 0.0 ? misfit : misfit / data_norm);
        if (truth) report.error_history.push_back(relative_or_absolute(rho, *truth));
        if (step <= tol * rho.l2_norm()) {
            report.converged = true;
            break;
        }
        const auto& h = report.step_history;
        // growth at roundoff level is noise, not divergence
        const bool grew = h.size() >= 2 && h[h.size() - 1] > h[h.size() - 2] && step > 1e-12 * rho.l2_norm();
        growth = grew ? growth + 1 : 0;
        if (growth >= 3) throw Divergence("fixed-point step norm grew for three consecutive iterations");
    }
    return report;
}

double LipschitzCertificate::constant() const { return std::max(c_hi, 1.0 / c_lo); }

LipschitzCertificate lipschitz_certificate(const SpectralField& g, double x0, FractionalOrder alpha,
                                           const TimeGrid& grid, const std::vector<TimeSeries>& family) {
    if (family.empty()) throw InvalidArgument("Lipschitz certificate needs a nonempty family");
    require_point(g, x0, 1e-8);
    const PointObservation obs(g, x0, alpha, grid);
    LipschitzCertificate cert{std::numeric_limits<double>::infinity(), 0.0, {}};
    for (const TimeSeries& rho : family) {
        if (!(rho.grid() == grid)) throw InvalidArgument("family member lives on a different grid");
        const double num = rho.max_abs();
        if (num == 0.0) throw InvalidArgument("family members must be nonzero");
        // d_t^alpha u(x0, .) = g(x0) rho - Q * rho; differencing the trace misses the
        // layer at t = 0, where the supremum usually sits
        const TimeSeries d = obs.g_at_x0() * rho - convolve(obs.q_weights(), rho);
        const double den = d.max_abs();
        const double r = num / den;
        cert.ratios.push_back(r);
        cert.c_lo = std::min(cert.c_lo, r);
        cert.c_hi = std::max(cert.c_hi, r);
    }
    return cert;
}

AdmissibleDiagnostics count_sign_changes(const TimeSeries& rho, double zero_tol) {
    std::size_t changes = 0;
    int last = 0;
    for (double v : rho.values()) {
        if (std::abs(v) <= zero_tol) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    double m = rho.max_abs();
    const double tau = rho.grid().step();
    for (std::size_t k = 1; k < rho.size(); ++k) m = std::max(m, std::abs(rho[k] - rho[k - 1]) / tau);
    return AdmissibleDiagnostics{changes, m};
}

TimeSeries moving_average(const TimeSeries& f, std::size_t width) {
    if (width < 1) throw InvalidArgument("moving-average width must be >= 1");
    const std::size_t half = width / 2;
    const std::size_t n = f.size();
    std::vector<double> out(n);
    out[0] = f[0];
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t h = std::min({half, k, n - 1 - k});
        double acc = 0.0;
        for (std::size_t j = k - h; j <= k + h; ++j) acc += f[j];
        out[k] = acc / static_cast<double>(2 * h + 1);
    }
    return TimeSeries(f.grid(), std::move(out));
}

}  // namespace fracsource
