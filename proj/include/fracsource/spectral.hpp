#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracsource {

/// The interval (0, L) with the first N Dirichlet eigenpairs of -d^2/dx^2:
/// lambda_n = (n pi / L)^2, phi_n(x) = sqrt(2/L) sin(n pi x / L), n = 1..N.
class Domain1D {
public:
    Domain1D(double length, std::size_t n_modes);

    double length() const noexcept { return length_; }
    std::size_t n_modes() const noexcept { return n_modes_; }

    /// lambda_n for 1 <= n (not limited to n_modes).
    double eigenvalue(std::size_t n) const;
    /// phi_n(x).
    double eigenfunction(std::size_t n, double x) const;
    /// lambda_1 .. lambda_N.
    std::vector<double> eigenvalues() const;

    bool operator==(const Domain1D&) const = default;

private:
    double length_;
    std::size_t n_modes_;
};

/// A function on (0, L) stored by its coefficients (f, phi_n), n = 1..N.
/// coeffs()[i] belongs to mode n = i + 1.
class SpectralField {
public:
    SpectralField(Domain1D domain, std::vector<double> coeffs);

    static SpectralField zero(const Domain1D& domain);
    /// phi_n itself.
    static SpectralField mode(const Domain1D& domain, std::size_t n);

    const Domain1D& domain() const noexcept { return domain_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double coeff(std::size_t n) const { return coeffs_.at(n - 1); }

    /// L^2 norm, equal to the Euclidean norm of the coefficients.
    double l2_norm() const;
    /// Root-mean-square of the top quarter of the coefficients: a proxy for the
    /// truncation error of the N-term expansion.
    double tail_estimate() const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);

private:
    Domain1D domain_;
    std::vector<double> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField f);

/// sum_n coeffs_n phi_n(x) for x in [0, L].
double eval_at(const SpectralField& f, double x);

/// (sum_n |lambda_n^gamma coeffs_n|^2)^(1/2), the norm of D((-Laplacian)^gamma).
double sobolev_norm(const SpectralField& f, double gamma);

/// Nodes x_j = j L / M, j = 0..M.
std::vector<double> uniform_mesh(double length, std::size_t intervals);

/// Composite Simpson weights on a uniform mesh with an even number of intervals.
std::vector<double> simpson_weights(double length, std::size_t intervals);

/// f evaluated at every mesh node.
std::vector<double> synthesize(const SpectralField& f, std::span<const double> mesh);

/// Coefficients of the samples (on uniform_mesh(L, samples.size() - 1)) by
/// composite Simpson quadrature of f phi_n. Requires an even number of
/// intervals and at least 2N + 1 interior nodes.
SpectralField project(std::span<const double> samples, const Domain1D& domain);

}  // namespace fracsource
