#include "fracsource/forward.hpp"

#include "fracsource/errors.hpp"
#include "fracsource/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>

namespace fracsource {

EvolutionField::EvolutionField(Domain1D domain, TimeGrid grid, std::vector<double> modal_values)
    : domain_(domain), grid_(grid), values_(std::move(modal_values)) {
    if (values_.size() != domain_.n_modes() * grid_.size()) {
        throw InvalidArgument("evolution field needs N x (n_steps + 1) modal values");
    }
}

EvolutionField EvolutionField::zeros(const Domain1D& domain, const TimeGrid& grid) {
    return EvolutionField(domain, grid, std::vector<double>(domain.n_modes() * grid.size(), 0.0));
}

EvolutionField EvolutionField::separable(const SpectralField& g, const TimeSeries& rho) {
    EvolutionField f = zeros(g.domain(), rho.grid());
    const std::size_t m = rho.size();
    for (std::size_t i = 0; i < f.n_modes(); ++i) {
        for (std::size_t k = 0; k < m; ++k) f.values_[i * m + k] = g.coeffs()[i] * rho[k];
    }
    return f;
}

double EvolutionField::value(std::size_t n, std::size_t k) const {
    if (n < 1 || n > n_modes() || k >= grid_.size()) throw InvalidArgument("evolution field index out of range");
    return values_[(n - 1) * grid_.size() + k];
}

TimeSeries EvolutionField::mode_series(std::size_t n) const {
    if (n < 1 || n > n_modes()) throw InvalidArgument("mode index out of range");
    const auto first = values_.begin() + static_cast<std::ptrdiff_t>((n - 1) * grid_.size());
    return TimeSeries(grid_, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(grid_.size())));
}

void EvolutionField::set_mode(std::size_t n, const TimeSeries& series) {
    if (n < 1 || n > n_modes()) throw InvalidArgument("mode index out of range");
    if (!(series.grid() == grid_)) throw InvalidArgument("mode series lives on a different grid");
    std::copy(series.values().begin(), series.values().end(),
              values_.begin() + static_cast<std::ptrdiff_t>((n - 1) * grid_.size()));
}

SpectralField EvolutionField::at_time(std::size_t k) const {
    if (k >= grid_.size()) throw InvalidArgument("time index out of range");
    std::vector<double> c(n_modes());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = values_[i * grid_.size() + k];
    return SpectralField(domain_, std::move(c));
}

EvolutionField EvolutionField::reversed() const {
    EvolutionField r = *this;
    const std::size_t m = grid_.size();
    for (std::size_t i = 0; i < n_modes(); ++i) {
        std::reverse(r.values_.begin() + static_cast<std::ptrdiff_t>(i * m),
                     r.values_.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
    }
    return r;
}

double EvolutionField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void EvolutionField::check_compatible(const EvolutionField& other) const {
    if (!(domain_ == other.domain_) || !(grid_ == other.grid_)) {
        throw InvalidArgument("evolution fields live on different domains or grids");
    }
}

EvolutionField& EvolutionField::operator+=(const EvolutionField& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

EvolutionField& EvolutionField::operator-=(const EvolutionField& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

EvolutionField& EvolutionField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

EvolutionField operator+(EvolutionField a, const EvolutionField& b) { return a += b; }
EvolutionField operator-(EvolutionField a, const EvolutionField& b) { return a -= b; }
EvolutionField operator*(double s, EvolutionField f) { return f *= s; }

struct ForwardSolver::Cache {
    Cache(double alpha, std::size_t n_modes)
        : source_kernel(alpha, alpha),
          relaxation_kernel(alpha, 1.0),
          source(n_modes),
          homogeneous(n_modes),
          relax(n_modes),
          source_once(n_modes),
          homogeneous_once(n_modes),
          relax_once(n_modes) {}

    MittagLefflerKernel source_kernel;
    MittagLefflerKernel relaxation_kernel;
    std::vector<std::optional<ConvolutionWeights>> source;
    std::vector<std::optional<ConvolutionWeights>> homogeneous;
    std::vector<std::optional<TimeSeries>> relax;
    std::vector<std::once_flag> source_once;
    std::vector<std::once_flag> homogeneous_once;
    std::vector<std::once_flag> relax_once;
};

ForwardSolver::ForwardSolver(Domain1D domain, TimeGrid grid, FractionalOrder alpha)
    : domain_(domain), grid_(grid), alpha_(alpha), cache_(std::make_shared<Cache>(alpha, domain.n_modes())) {}

const ConvolutionWeights& ForwardSolver::source_weights(std::size_t n) const {
    if (n < 1 || n > domain_.n_modes()) throw InvalidArgument("mode index out of range");
    std::call_once(cache_->source_once[n - 1], [&] {
        cache_->source[n - 1] = cache_->source_kernel.weights(domain_.eigenvalue(n), grid_);
    });
    return *cache_->source[n - 1];
}

const ConvolutionWeights& ForwardSolver::homogeneous_weights(std::size_t n) const {
    if (n < 1 || n > domain_.n_modes()) throw InvalidArgument("mode index out of range");
    std::call_once(cache_->homogeneous_once[n - 1], [&] {
        cache_->homogeneous[n - 1] = cache_->relaxation_kernel.weights(domain_.eigenvalue(n), grid_);
    });
    return *cache_->homogeneous[n - 1];
}

const TimeSeries& ForwardSolver::relaxation(std::size_t n) const {
    if (n < 1 || n > domain_.n_modes()) throw InvalidArgument("mode index out of range");
    std::call_once(cache_->relax_once[n - 1], [&] {
        const double lambda = domain_.eigenvalue(n);
        const MittagLeffler& e = cache_->relaxation_kernel.evaluator();
        cache_->relax[n - 1] = TimeSeries::sample(grid_, [&](double t) {
            return e(-lambda * std::pow(t, alpha_));
        });
    });
    return *cache_->relax[n - 1];
}

EvolutionField ForwardSolver::homogeneous(const SpectralField& a) const {
    if (!(a.domain() == domain_)) throw InvalidArgument("initial datum lives on a different domain");
    EvolutionField w = EvolutionField::zeros(domain_, grid_);
    parallel_for(domain_.n_modes(), [&](std::size_t i) {
        const double c = a.coeffs()[i];
        if (c == 0.0) return;
        w.set_mode(i + 1, c * relaxation(i + 1));
    });
    return w;
}

EvolutionField ForwardSolver::inhomogeneous(const EvolutionField& source) const {
    if (!(source.domain() == domain_)) throw InvalidArgument("source lives on a different domain");
    if (!(source.grid() == grid_)) throw InvalidArgument("source lives on a different time grid");
    EvolutionField u = EvolutionField::zeros(domain_, grid_);
    parallel_for(domain_.n_modes(), [&](std::size_t i) {
        const TimeSeries f = source.mode_series(i + 1);
        if (f.max_abs() == 0.0) return;
        u.set_mode(i + 1, convolve(source_weights(i + 1), f));
    });
    return u;
}

EvolutionField ForwardSolver::inhomogeneous(const SpectralField& g, const TimeSeries& rho) const {
    if (!(g.domain() == domain_)) throw InvalidArgument("g lives on a different domain");
    if (!(rho.grid() == grid_)) throw InvalidArgument("rho lives on a different time grid");
    EvolutionField u = EvolutionField::zeros(domain_, grid_);
    if (rho.max_abs() == 0.0) return u;
    parallel_for(domain_.n_modes(), [&](std::size_t i) {
        const double c = g.coeffs()[i];
        if (c == 0.0) return;
        u.set_mode(i + 1, c * convolve(source_weights(i + 1), rho));
    });
    return u;
}

EvolutionField ForwardSolver::backward_adjoint(const EvolutionField& rhs) const {
    return inhomogeneous(rhs.reversed()).reversed();
}

EvolutionField solve_homogeneous(const SpectralField& a, FractionalOrder alpha, const TimeGrid& grid) {
    return ForwardSolver(a.domain(), grid, alpha).homogeneous(a);
}

EvolutionField solve_inhomogeneous(const EvolutionField& source, FractionalOrder alpha,
                                   const TimeGrid& grid) {
    if (!(source.grid() == grid)) throw InvalidArgument("source lives on a different time grid");
    return ForwardSolver(source.domain(), grid, alpha).inhomogeneous(source);
}

EvolutionField solve_backward_adjoint(const EvolutionField& rhs, FractionalOrder alpha,
                                      const TimeGrid& grid) {
    if (!(rhs.grid() == grid)) throw InvalidArgument("right-hand side lives on a different time grid");
    return ForwardSolver(rhs.domain(), grid, alpha).backward_adjoint(rhs);
}

std::vector<double> singular_exponents(double alpha, double limit) {
    // u ~ sum c_{j,m} t^(j alpha + m) near t = 0 for smooth rho
    std::vector<double> sigma;
    for (int j = 1; j * alpha < limit; ++j) {
        for (int m = 0; j * alpha + m < limit; ++m) {
            const double s = j * alpha + m;
            if (std::abs(s - std::round(s)) < 1e-9) continue;
            if (std::none_of(sigma.begin(), sigma.end(), [&](double x) { return std::abs(x - s) < 1e-9; })) {
                sigma.push_back(s);
            }
        }
    }
    std::sort(sigma.begin(), sigma.end());
    return sigma;
}

double duhamel_residual(const SpectralField& g, const TimeSeries& rho, FractionalOrder alpha) {
    const ForwardSolver solver(g.domain(), rho.grid(), alpha);
    const std::vector<double> exponents = singular_exponents(alpha.value(), 1.0 + alpha.value());
    const EvolutionField u = solver.inhomogeneous(g, rho);
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t n = 1; n <= g.domain().n_modes(); ++n) {
        const double c = g.coeff(n);
        if (c == 0.0) continue;
        const TimeSeries lhs = rl_integral_forward(u.mode_series(n), 1.0 - alpha.value(), exponents);
        // (rho * v_n)(t) with v_n(s) = c E_{alpha,1}(-lambda_n s^alpha)
        const TimeSeries rhs = c * convolve(solver.homogeneous_weights(n), rho);
        worst = std::max(worst, (lhs - rhs).max_abs());
        scale = std::max(scale, lhs.max_abs());
    }
    if (scale == 0.0) return worst;
    return worst / scale;
}

TimeSeries observe_point(const EvolutionField& u, double x0) {
    const double L = u.domain().length();
    if (!(x0 > 0.0 && x0 < L)) throw InvalidArgument("observation point must lie strictly inside (0, L)");
    std::vector<double> phi(u.n_modes());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = u.domain().eigenfunction(i + 1, x0);
    std::vector<double> trace(u.grid().size(), 0.0);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) acc += u.value(i + 1, k) * phi[i];
        trace[k] = acc;
    }
    return TimeSeries(u.grid(), std::move(trace));
}

double smoothing_ratio(const SpectralField& a, FractionalOrder alpha, const TimeGrid& grid) {
    const double norm = a.l2_norm();
    if (norm == 0.0) throw InvalidArgument("smoothing ratio needs a nonzero initial datum");
    const EvolutionField w = solve_homogeneous(a, alpha, grid);
    double worst = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double t = grid.node(k);
        worst = std::max(worst, std::pow(t, alpha.value()) * sobolev_norm(w.at_time(k), 1.0) / norm);
    }
    return worst;
}

}  // namespace fracsource
