#include "fracsource/spectral.hpp"

#include "fracsource/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fracsource {

namespace {

void require_same_domain(const Domain1D& a, const Domain1D& b) {
    if (!(a == b)) throw InvalidArgument("spectral fields live on different domains");
}

}  // namespace

Domain1D::Domain1D(double length, std::size_t n_modes) : length_(length), n_modes_(n_modes) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw InvalidArgument("domain length must be positive, got " + std::to_string(length));
    }
    if (n_modes < 1) throw InvalidArgument("domain needs at least one mode");
}

double Domain1D::eigenvalue(std::size_t n) const {
    if (n < 1) throw InvalidArgument("mode index starts at 1");
    const double k = static_cast<double>(n) * std::numbers::pi / length_;
    return k * k;
}

double Domain1D::eigenfunction(std::size_t n, double x) const {
    if (n < 1) throw InvalidArgument("mode index starts at 1");
    return std::sqrt(2.0 / length_) * std::sin(static_cast<double>(n) * std::numbers::pi * x / length_);
}

std::vector<double> Domain1D::eigenvalues() const {
    std::vector<double> out(n_modes_);
    for (std::size_t i = 0; i < n_modes_; ++i) out[i] = eigenvalue(i + 1);
    return out;
}

SpectralField::SpectralField(Domain1D domain, std::vector<double> coeffs)
    : domain_(domain), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != domain_.n_modes()) {
        throw InvalidArgument("expected " + std::to_string(domain_.n_modes()) +
                              " coefficients, got " + std::to_string(coeffs_.size()));
    }
}

SpectralField SpectralField::zero(const Domain1D& domain) {
    return SpectralField(domain, std::vector<double>(domain.n_modes(), 0.0));
}

SpectralField SpectralField::mode(const Domain1D& domain, std::size_t n) {
    if (n < 1 || n > domain.n_modes()) throw InvalidArgument("mode index out of range");
    std::vector<double> c(domain.n_modes(), 0.0);
    c[n - 1] = 1.0;
    return SpectralField(domain, std::move(c));
}

double SpectralField::l2_norm() const { return sobolev_norm(*this, 0.0); }

double SpectralField::tail_estimate() const {
    const std::size_t n = coeffs_.size();
    const std::size_t start = n - std::max<std::size_t>(1, n / 4);
    double acc = 0.0;
    for (std::size_t i = start; i < n; ++i) acc += coeffs_[i] * coeffs_[i];
    return std::sqrt(acc / static_cast<double>(n - start));
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_domain(domain_, other.domain_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_domain(domain_, other.domain_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField f) { return f *= s; }

double eval_at(const SpectralField& f, double x) {
    const Domain1D& d = f.domain();
    if (!(x >= 0.0 && x <= d.length())) {
        throw InvalidArgument("evaluation point " + std::to_string(x) + " outside [0, L]");
    }
    const auto c = f.coeffs();
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] * d.eigenfunction(i + 1, x);
    return acc;
}

double sobolev_norm(const SpectralField& f, double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw InvalidArgument("Sobolev exponent gamma must be >= 0");
    }
    const Domain1D& d = f.domain();
    const auto c = f.coeffs();
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double w = gamma == 0.0 ? c[i] : std::pow(d.eigenvalue(i + 1), gamma) * c[i];
        acc += w * w;
    }
    return std::sqrt(acc);
}

std::vector<double> uniform_mesh(double length, std::size_t intervals) {
    if (intervals < 1) throw InvalidArgument("mesh needs at least one interval");
    std::vector<double> x(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j) {
        x[j] = length * static_cast<double>(j) / static_cast<double>(intervals);
    }
    x.back() = length;
    return x;
}

std::vector<double> simpson_weights(double length, std::size_t intervals) {
    if (intervals < 2 || intervals % 2 != 0) {
        throw InvalidArgument("Simpson quadrature needs an even number of intervals, got " +
                              std::to_string(intervals));
    }
    const double h = length / static_cast<double>(intervals);
    std::vector<double> w(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j) {
        w[j] = (j == 0 || j == intervals) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        w[j] *= h / 3.0;
    }
    return w;
}

std::vector<double> synthesize(const SpectralField& f, std::span<const double> mesh) {
    std::vector<double> out;
    out.reserve(mesh.size());
    for (double x : mesh) out.push_back(eval_at(f, x));
    return out;
}

SpectralField project(std::span<const double> samples, const Domain1D& domain) {
    if (samples.size() < 2) throw InvalidArgument("projection needs at least two samples");
    const std::size_t intervals = samples.size() - 1;
    const std::size_t interior = intervals - 1;
    if (interior < 2 * domain.n_modes() + 1) {
        throw InvalidArgument("mesh too coarse: " + std::to_string(interior) +
                              " interior points for " + std::to_string(domain.n_modes()) +
                              " modes (need >= 2N+1)");
    }
    const auto w = simpson_weights(domain.length(), intervals);
    const auto x = uniform_mesh(domain.length(), intervals);
    std::vector<double> c(domain.n_modes(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 1; j < intervals; ++j) {
            acc += w[j] * samples[j] * domain.eigenfunction(i + 1, x[j]);
        }
        c[i] = acc;
    }
    return SpectralField(domain, std::move(c));
}

}  // namespace fracsource
