#pragma once

#include "fracsource/fracops.hpp"
#include "fracsource/spectral.hpp"
#include "fracsource/time_series.hpp"

#include <memory>
#include <vector>

namespace fracsource {

/// A space-time field stored mode by mode: value(n, k) = (u(., t_k), phi_n),
/// n = 1..N, k = 0..n_steps.
class EvolutionField {
public:
    EvolutionField(Domain1D domain, TimeGrid grid, std::vector<double> modal_values);

    static EvolutionField zeros(const Domain1D& domain, const TimeGrid& grid);
    /// g(x) rho(t).
    static EvolutionField separable(const SpectralField& g, const TimeSeries& rho);

    const Domain1D& domain() const noexcept { return domain_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t n_modes() const noexcept { return domain_.n_modes(); }

    double value(std::size_t n, std::size_t k) const;
    /// Row n as a time series.
    TimeSeries mode_series(std::size_t n) const;
    void set_mode(std::size_t n, const TimeSeries& series);
    /// Snapshot u(., t_k).
    SpectralField at_time(std::size_t k) const;

    /// Every row reversed in time.
    EvolutionField reversed() const;
    /// max over modes and nodes of |value|.
    double max_abs() const;

    EvolutionField& operator+=(const EvolutionField& other);
    EvolutionField& operator-=(const EvolutionField& other);
    EvolutionField& operator*=(double s);

private:
    void check_compatible(const EvolutionField& other) const;

    Domain1D domain_;
    TimeGrid grid_;
    std::vector<double> values_;  // row-major, N x (n_steps + 1)
};

EvolutionField operator+(EvolutionField a, const EvolutionField& b);
EvolutionField operator-(EvolutionField a, const EvolutionField& b);
EvolutionField operator*(double s, EvolutionField f);

/// Spectral solver for d_t^alpha u - u_xx = F on (0, L) x (0, T] with
/// homogeneous Dirichlet conditions. Caches, per mode, the product-integration
/// weights of the kernels s^(alpha-1) E_{alpha,alpha}(-lambda_n s^alpha) and
/// E_{alpha,1}(-lambda_n s^alpha) on first use, so one instance should serve
/// repeated solves on the same domain and grid. Thread-safe.
class ForwardSolver {
public:
    ForwardSolver(Domain1D domain, TimeGrid grid, FractionalOrder alpha);

    const Domain1D& domain() const noexcept { return domain_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    double alpha() const noexcept { return alpha_; }

    /// u(., 0) = a, F = 0: value(n, k) = E_{alpha,1}(-lambda_n t_k^alpha) a_n.
    EvolutionField homogeneous(const SpectralField& a) const;

    /// u(., 0) = 0: u_n(t) = int_0^t s^(alpha-1) E_{alpha,alpha}(-lambda_n s^alpha) F_n(t - s) ds.
    EvolutionField inhomogeneous(const EvolutionField& source) const;
    /// inhomogeneous() for F = g(x) rho(t), sharing one convolution per mode.
    EvolutionField inhomogeneous(const SpectralField& g, const TimeSeries& rho) const;

    /// z solving -J_{T-}^{1-alpha} z_t - z_xx = rhs, z(., T) = 0, obtained as the
    /// time reversal of the forward solution driven by the reversed rhs.
    EvolutionField backward_adjoint(const EvolutionField& rhs) const;

    /// Weights of the Duhamel kernel s^(alpha-1) E_{alpha,alpha}(-lambda_n s^alpha).
    const ConvolutionWeights& source_weights(std::size_t n) const;
    /// Weights of the homogeneous-solution kernel E_{alpha,1}(-lambda_n s^alpha).
    const ConvolutionWeights& homogeneous_weights(std::size_t n) const;

    /// E_{alpha,1}(-lambda_n t^alpha) at every node.
    const TimeSeries& relaxation(std::size_t n) const;

private:
    struct Cache;

    Domain1D domain_;
    TimeGrid grid_;
    double alpha_;
    std::shared_ptr<Cache> cache_;
};

EvolutionField solve_homogeneous(const SpectralField& a, FractionalOrder alpha, const TimeGrid& grid);

/// Throws InvalidArgument if the source lives on a different grid.
EvolutionField solve_inhomogeneous(const EvolutionField& source, FractionalOrder alpha,
                                   const TimeGrid& grid);

EvolutionField solve_backward_adjoint(const EvolutionField& rhs, FractionalOrder alpha,
                                      const TimeGrid& grid);

/// Non-integer exponents j alpha + m < limit (j >= 1, m >= 0) of the t -> 0
/// expansion of a solution driven by a smooth source, ascending.
std::vector<double> singular_exponents(double alpha, double limit);

/// max over modes and nodes of |J^{1-alpha} u - rho * v| divided by max |J^{1-alpha} u|,
/// with u driven by g rho from zero data and v the homogeneous solution from g.
/// Returns 0 when both sides vanish. J^{1-alpha} is the product-trapezoidal
/// rule with starting corrections for singular_exponents(alpha, 1 + alpha).
double duhamel_residual(const SpectralField& g, const TimeSeries& rho, FractionalOrder alpha);

/// t_k -> sum_n value(n, k) phi_n(x0), for 0 < x0 < L.
TimeSeries observe_point(const EvolutionField& u, double x0);

/// max over k >= 1 of t_k^alpha ||w(., t_k)||_{D(-Laplacian)} / ||a||, for the
/// homogeneous solution w from a.
double smoothing_ratio(const SpectralField& a, FractionalOrder alpha, const TimeGrid& grid);

}  // namespace fracsource
