#pragma once

#include "fracsource/spectral.hpp"
#include "fracsource/time_series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fracsource {

/// Spatial profile for synthetic sources.
/// kind: "mode" (phi_mode), "sine-bump" (sin(pi (x - a) / (b - a)) on [a, b]),
/// "hat" (piecewise linear, peak at (a + b) / 2), "offset-bump" (C-infinity
/// bump on [a, b]; the defaults put it away from the usual observation points).
struct GProfile {
    std::string kind = "sine-bump";
    std::size_t mode = 1;
    double a = 0.2;  ///< support start, as a fraction of L
    double b = 0.8;  ///< support end, as a fraction of L
    double scale = 1.0;
};

/// Temporal profile.
/// kind: "constant" (c0), "affine" (c0 + c1 t), "sine" (c0 sin(pi t / T)),
/// "sign-alternating" (c0 sin((changes + 1) pi t / T), changes interior sign changes).
struct RhoProfile {
    std::string kind = "affine";
    double c0 = 1.0;
    double c1 = 1.0;
    std::size_t changes = 1;
};

/// Known kinds, for validation.
const std::vector<std::string>& g_profile_kinds();
const std::vector<std::string>& rho_profile_kinds();

/// Projection of the profile onto the first N modes (Simpson on 64 N intervals).
/// Throws InvalidArgument for unknown kinds or bad supports.
SpectralField make_g(const GProfile& profile, const Domain1D& domain);

TimeSeries make_rho(const RhoProfile& profile, const TimeGrid& grid);

/// series + level * max|series| * U(-1, 1), i.i.d. per node, from a 64-bit
/// Mersenne Twister seeded with seed.
TimeSeries add_noise(const TimeSeries& series, double level, std::uint64_t seed);

/// Same for a vector of samples.
std::vector<double> add_noise(const std::vector<double>& samples, double level, std::uint64_t seed);

}  // namespace fracsource
