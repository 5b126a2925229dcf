#pragma once

#include "fracsource/fracops.hpp"
#include "fracsource/report.hpp"
#include "fracsource/spectral.hpp"
#include "fracsource/time_series.hpp"

#include <optional>
#include <vector>

namespace fracsource {

/// Recover rho(t) from the trace u(x0, .) of the solution driven by g(x) rho(t)
/// with zero initial data. The grid is the trace's grid.
struct TSourceProblem {
    SpectralField g;
    double x0;
    FractionalOrder alpha;
    TimeSeries trace;
    /// Relative noise amplitude of the trace; > 0 enables premollification.
    double noise_level = 0.0;
    /// |g(x0)| below this is treated as g(x0) = 0.
    double point_tolerance = 1e-8;
    /// Moving-average width (nodes) applied to noisy traces.
    std::size_t smoothing_width = 5;
};

/// Q(x0, t) = t^(alpha-1) * smooth(t) with
/// smooth(t) = sum_n lambda_n E_{alpha,alpha}(-lambda_n t^alpha) (g, phi_n) phi_n(x0).
struct SingularKernel {
    double power;  ///< alpha: the kernel is t^(power - 1) times the smooth factor
    TimeSeries smooth_factor;

    /// Q at node k >= 1.
    double value(std::size_t k) const;
};

SingularKernel kernel_q(const SpectralField& g, double x0, FractionalOrder alpha, const TimeGrid& grid);

/// Trace-level forward map rho -> u(x0, .) for fixed g, built once.
class PointObservation {
public:
    PointObservation(const SpectralField& g, double x0, FractionalOrder alpha, const TimeGrid& grid);

    TimeSeries trace(const TimeSeries& rho) const;
    /// Weights of int_0^t Q(x0, s) rho(t - s) ds.
    const ConvolutionWeights& q_weights() const noexcept { return q_weights_; }
    /// sum_n (g, phi_n) phi_n(x0) E_{alpha,2}(-lambda_n tau^alpha) = g(x0) - (weight of rho_k in Q * rho at t_k).
    double diagonal() const noexcept { return diagonal_; }
    double g_at_x0() const noexcept { return g_x0_; }
    /// v(x0, t_k) for the homogeneous solution v with v(., 0) = g.
    const TimeSeries& homogeneous_trace() const noexcept { return v_trace_; }

private:
    ConvolutionWeights trace_weights_;
    ConvolutionWeights q_weights_;
    double diagonal_ = 0.0;
    double g_x0_ = 0.0;
    TimeSeries v_trace_;
};

/// Solves rho g(x0) = d_t^alpha u(x0, t) + int_0^t Q(x0, s) rho(t - s) ds with the
/// L1 derivative of the trace and exact-kernel product integration, by forward
/// substitution. Exact traces (noise_level = 0) get starting corrections for
/// the t^(j alpha) terms; noisy ones are mollified and use plain L1.
/// rho(0) is closed by linear extrapolation from rho(t_1), rho(t_2).
/// Throws PointDegenerate, NonZeroInitialTrace.
ReconstructionReport<TimeSeries> solve_volterra(const TSourceProblem& problem);

/// rho_m = rho_{m-1} + d_t^alpha (trace - u(rho_{m-1})(x0, .)) / K from rho_0 = 0.
/// Stops when ||rho_m - rho_{m-1}|| <= tol ||rho_m|| or after m_max steps.
/// Requires K >= max_k |v(x0, t_k)|. Throws NonPositiveParams, InvalidArgument
/// (K below the bound), Divergence (step norm grows three times in a row).
ReconstructionReport<TimeSeries> fixed_point_iterate(const TSourceProblem& problem, double K,
                                                     std::size_t m_max, double tol,
                                                     const std::optional<TimeSeries>& truth = std::nullopt);

/// max_k |v(x0, t_k)|: the smallest admissible K for fixed_point_iterate.
double fixed_point_bound(const SpectralField& g, double x0, FractionalOrder alpha, const TimeGrid& grid);

struct LipschitzCertificate {
    double c_lo;
    double c_hi;
    std::vector<double> ratios;
    /// max(c_hi, 1 / c_lo).
    double constant() const;
};

/// ratio ||rho||_inf / ||d_t^alpha u(x0, .)||_inf over the family, with
/// d_t^alpha u(x0, .) = g(x0) rho - Q * rho evaluated on all nodes.
LipschitzCertificate lipschitz_certificate(const SpectralField& g, double x0, FractionalOrder alpha,
                                           const TimeGrid& grid, const std::vector<TimeSeries>& family);

struct AdmissibleDiagnostics {
    std::size_t sign_changes;
    /// max(max |rho|, max |forward difference quotient|).
    double c1_bound;
};

/// Sign alternations among samples with |value| > zero_tol.
AdmissibleDiagnostics count_sign_changes(const TimeSeries& rho, double zero_tol);

/// Centered moving average of the given width (odd widths are symmetric;
/// windows shrink at the ends). Node 0 is kept.
TimeSeries moving_average(const TimeSeries& f, std::size_t width);

}  // namespace fracsource
