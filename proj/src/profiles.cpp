#include "fracsource/profiles.hpp"

#include "fracsource/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace fracsource {

namespace {

double g_shape(const GProfile& p, double y) {
    if (p.kind == "sine-bump") return std::sin(std::numbers::pi * y);
    if (p.kind == "hat") return 1.0 - std::abs(2.0 * y - 1.0);
    // offset-bump, scaled to peak 1 at y = 1/2
    return std::exp(4.0 - 1.0 / (y * (1.0 - y)));
}

std::vector<double> noisy(std::span<const double> v, double level, std::uint64_t seed) {
    if (!(level >= 0.0) || !std::isfinite(level)) throw InvalidArgument("noise level must be >= 0");
    std::vector<double> out(v.begin(), v.end());
    if (level == 0.0) return out;
    double amp = 0.0;
    for (double x : v) amp = std::max(amp, std::abs(x));
    amp *= level;
    std::mt19937_64 gen(seed);
    for (double& x : out) {
        // 53 random bits mapped to [-1, 1); avoids the library-specific distribution classes
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        x += amp * (2.0 * u - 1.0);
    }
    return out;
}

}  // namespace

const std::vector<std::string>& g_profile_kinds() {
    static const std::vector<std::string> kinds{"mode", "sine-bump", "hat", "offset-bump"};
    return kinds;
}

const std::vector<std::string>& rho_profile_kinds() {
    static const std::vector<std::string> kinds{"constant", "affine", "sine", "sign-alternating"};
    return kinds;
}

SpectralField make_g(const GProfile& p, const Domain1D& domain) {
    const auto& kinds = g_profile_kinds();
    if (std::find(kinds.begin(), kinds.end(), p.kind) == kinds.end()) {
        throw InvalidArgument("unknown g profile '" + p.kind + "'");
    }
    if (p.kind == "mode") {
        if (p.mode < 1 || p.mode > domain.n_modes()) throw InvalidArgument("g mode index out of range");
        return p.scale * SpectralField::mode(domain, p.mode);
    }
    if (!(0.0 <= p.a && p.a < p.b && p.b <= 1.0)) throw InvalidArgument("g support needs 0 <= a < b <= 1");
    const double L = domain.length();
    const std::size_t intervals = 64 * domain.n_modes();
    const std::vector<double> mesh = uniform_mesh(L, intervals);
    std::vector<double> samples(mesh.size(), 0.0);
    for (std::size_t j = 0; j < mesh.size(); ++j) {
        const double y = (mesh[j] / L - p.a) / (p.b - p.a);
        if (y > 0.0 && y < 1.0) samples[j] = p.scale * g_shape(p, y);
    }
    return project(samples, domain);
}

TimeSeries make_rho(const RhoProfile& p, const TimeGrid& grid) {
    const double T = grid.final_time();
    if (p.kind == "constant") return TimeSeries::constant(grid, p.c0);
    if (p.kind == "affine") return TimeSeries::sample(grid, [&](double t) { return p.c0 + p.c1 * t; });
    if (p.kind == "sine") {
        return TimeSeries::sample(grid, [&](double t) { return p.c0 * std::sin(std::numbers::pi * t / T); });
    }
    if (p.kind == "sign-alternating") {
        const double w = static_cast<double>(p.changes + 1) * std::numbers::pi / T;
        return TimeSeries::sample(grid, [&](double t) { return p.c0 * std::sin(w * t); });
    }
    throw InvalidArgument("unknown rho profile '" + p.kind + "'");
}

TimeSeries add_noise(const TimeSeries& series, double level, std::uint64_t seed) {
    return TimeSeries(series.grid(), noisy(series.values(), level, seed));
}

std::vector<double> add_noise(const std::vector<double>& samples, double level, std::uint64_t seed) {
    return noisy(samples, level, seed);
}

}  // namespace fracsource
