#pragma once

#include "fracsource/forward.hpp"
#include "fracsource/report.hpp"
#include "fracsource/spectral.hpp"
#include "fracsource/time_series.hpp"

#include <optional>
#include <vector>

namespace fracsource {

/// B_n = int_0^T s^(alpha-1) E_{alpha,alpha}(-lambda s^alpha) rho(T - s) ds, the
/// factor taking (g, phi_n) to (u(., T), phi_n).
double modal_response(double lambda, const TimeSeries& rho, FractionalOrder alpha);

/// Recover g from u(., T) for known rho.
struct XSourceFinalProblem {
    TimeSeries rho;
    FractionalOrder alpha;
    SpectralField final_data;
    /// Modes with |B_n| < cutoff are dropped.
    double cutoff = 0.0;
    /// Tikhonov weight. Unset: discrepancy principle when noise_level > 0, else 1e-10.
    std::optional<double> tikhonov;
    /// Relative noise amplitude of the final data (uniform, level * max|u(., T)|).
    double noise_level = 0.0;
};

/// g_n = B_n u_n / (B_n^2 + mu) over the retained modes. Diagnostics: mu,
/// retained_modes, discrepancy (L2 norm of sum g_n B_n phi_n - u(., T)).
/// Throws DegenerateRho (rho vanishes on the last quarter of the grid),
/// AllModesCut, InvalidArgument.
ReconstructionReport<SpectralField> reconstruct_final(const XSourceFinalProblem& problem);

/// ||g||_L2 / (E^(1/(gamma+1)) ||u(., T)||_L2^(gamma/(gamma+1))) with
/// E = ||g||_D((-Laplacian)^gamma) and u(., T) from the modal responses.
/// Throws InvalidArgument for g = 0 or gamma <= 0.
double holder_ratio(const SpectralField& g, const TimeSeries& rho, FractionalOrder alpha, double gamma);

/// Samples of u on the nodes of uniform_mesh(L, mesh_intervals) lying in [a, b].
struct InteriorObservation {
    double a;
    double b;
    std::size_t mesh_intervals;
    /// Indices into the full mesh.
    std::vector<std::size_t> nodes;
    /// Row-major nodes.size() x (n_steps + 1).
    std::vector<double> values;
};

/// Restricts u to omega = (a, b) on the given mesh. Requires 0 < a < b < L and an
/// even interval count >= 2N (projection needs it).
InteriorObservation observe_interior(const EvolutionField& u, double a, double b, std::size_t mesh_intervals);

/// Recover g from u on omega x (0, T) for known rho with rho(0) != 0.
struct XSourceInteriorProblem {
    Domain1D domain;
    TimeSeries rho;
    FractionalOrder alpha;
    InteriorObservation observed;
    double K = 0.0;
    double beta = 1e-8;
    std::size_t m_max = 200;
    double tol = 1e-10;
};

/// g_{m+1} = (K g_m - int_0^T rho z(g_m) dt) / (K + beta) from g_0 = 0, where z
/// solves the backward problem driven by chi_omega (u(g_m) - observed), projected
/// onto the basis with the Simpson weights of the mesh. Stops when
/// ||g_{m+1} - g_m|| <= tol ||g_{m+1}|| or at m_max. residual_history holds
/// ||chi_omega (u(g_m) - observed)||_{L2(omega x (0, T))} for each iterate before
/// its update. Diagnostics: K, beta, final residual.
/// Throws NonPositiveParams, DegenerateRho (rho(0) = 0), Divergence (residual
/// grows three times in a row), InvalidArgument (shape mismatch).
ReconstructionReport<SpectralField> iterative_thresholding(const XSourceInteriorProblem& problem,
                                                           const std::optional<SpectralField>& truth = std::nullopt);

/// Largest eigenvalue of g -> int_0^T rho z(chi_omega u(g)) dt by power iteration
/// from a fixed start vector; K = 1.1 times this is the usual choice. Needs iters >= 5.
double estimate_k(const XSourceInteriorProblem& problem, std::size_t iters);

}  // namespace fracsource
