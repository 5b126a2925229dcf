#include "fracsource/errors.hpp"
#include "fracsource/forward.hpp"
#include "fracsource/inverse_t.hpp"
#include "fracsource/mittag_leffler.hpp"
#include "fracsource/profiles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace fracsource {
namespace {

const Domain1D kDomain(1.0, 32);
constexpr double kX0 = 0.45;

SpectralField bump() { return make_g(GProfile{}, kDomain); }

// Trace from the full forward solver, not from PointObservation.
TimeSeries forward_trace(const SpectralField& g, const TimeSeries& rho, double alpha, double x0) {
    const ForwardSolver solver(g.domain(), rho.grid(), FractionalOrder(alpha));
    return observe_point(solver.inhomogeneous(g, rho), x0);
}

TSourceProblem problem(const SpectralField& g, double alpha, const TimeSeries& rho) {
    return TSourceProblem{g, kX0, FractionalOrder(alpha), forward_trace(g, rho, alpha, kX0)};
}

std::vector<TimeSeries> random_family(const TimeGrid& grid, std::size_t count) {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<TimeSeries> family;
    for (std::size_t i = 0; i < count; ++i) {
        const double a0 = 1.0 + coef(gen), a1 = coef(gen), a2 = coef(gen), a3 = coef(gen);
        family.push_back(TimeSeries::sample(grid, [=](double t) {
            return a0 + a1 * t + a2 * std::cos(std::numbers::pi * t) + a3 * std::sin(2.0 * std::numbers::pi * t);
        }));
    }
    return family;
}

TEST(KernelQ, SingleMode) {
    const double alpha = 0.6;
    const TimeGrid grid(1.0, 16);
    const auto q = kernel_q(SpectralField::mode(kDomain, 1), kX0, FractionalOrder(alpha), grid);
    EXPECT_EQ(q.power, alpha);
    const double l1 = kDomain.eigenvalue(1);
    const MittagLeffler e(MLParams(alpha, alpha));
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double t = grid.node(k);
        const double expected = std::pow(t, alpha - 1.0) * l1 * e(-l1 * std::pow(t, alpha)) *
                                kDomain.eigenfunction(1, kX0);
        EXPECT_NEAR(q.value(k), expected, 1e-13 * std::abs(expected));
    }
    EXPECT_THROW(q.value(0), InvalidArgument);
}

TEST(KernelQ, ZeroField) {
    const TimeGrid grid(1.0, 8);
    const auto q = kernel_q(SpectralField::zero(kDomain), kX0, FractionalOrder(0.5), grid);
    EXPECT_EQ(q.smooth_factor.max_abs(), 0.0);
    EXPECT_EQ(q.value(3), 0.0);
}

TEST(KernelQ, WeightedSingularityStaysBounded) {
    // sine-bump coefficients decay like n^-3, so g lies in D((-Laplacian)^gamma) for gamma = 1/2
    const double gamma = 0.5;
    const double eps = (gamma - 0.25) / 2.0;
    const double alpha = 0.5;
    auto weighted_sup = [&](std::size_t n) {
        const TimeGrid grid(1.0, n);
        const auto q = kernel_q(bump(), kX0, FractionalOrder(alpha), grid);
        double sup = 0.0;
        for (std::size_t k = 1; k < grid.size(); ++k) {
            sup = std::max(sup, std::abs(q.value(k)) * std::pow(grid.node(k), 1.0 - alpha * eps));
        }
        return sup;
    };
    const double coarse = weighted_sup(256);
    const double fine = weighted_sup(4096);
    EXPECT_TRUE(std::isfinite(fine));
    EXPECT_LT(std::abs(fine - coarse), 0.1 * coarse);
}

TEST(SolveVolterra, ZeroTraceGivesZero) {
    const TimeGrid grid(1.0, 64);
    const auto r = solve_volterra(TSourceProblem{bump(), kX0, FractionalOrder(0.5), TimeSeries::zeros(grid)});
    for (double v : r.value.values()) EXPECT_EQ(v, 0.0);
}

TEST(SolveVolterra, RoundTripAffine) {
    const TimeGrid grid(1.0, 512);
    const auto rho = TimeSeries::sample(grid, [](double t) { return 1.0 + t; });
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
        const auto r = solve_volterra(problem(bump(), alpha, rho));
        EXPECT_LE(relative_l2_error(r.value, rho), 1e-2) << "alpha " << alpha;
        EXPECT_LT(r.residual_history.front(), 1e-2);
    }
}

TEST(SolveVolterra, RoundTripSine) {
    const TimeGrid grid(1.0, 512);
    const auto rho = TimeSeries::sample(grid, [](double t) { return std::sin(std::numbers::pi * t); });
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
        const auto r = solve_volterra(problem(bump(), alpha, rho));
        EXPECT_LE(relative_l2_error(r.value, rho), 1e-2) << "alpha " << alpha;
    }
}

TEST(SolveVolterra, ErrorShrinksWithRefinement) {
    double last = 1.0;
    for (std::size_t n : {128, 256, 512}) {
        const auto rho = TimeSeries::sample(TimeGrid(1.0, n), [](double t) { return 1.0 + t; });
        const double err = relative_l2_error(solve_volterra(problem(bump(), 0.5, rho)).value, rho);
        EXPECT_LT(err, last);
        last = err;
    }
}

TEST(SolveVolterra, Errors) {
    const TimeGrid grid(1.0, 32);
    // phi_2 vanishes at the midpoint
    const auto g2 = SpectralField::mode(kDomain, 2);
    EXPECT_THROW(solve_volterra(TSourceProblem{g2, 0.5, FractionalOrder(0.5), TimeSeries::zeros(grid)}),
                 PointDegenerate);
    auto trace = TimeSeries::zeros(grid);
    trace[0] = 0.1;
    trace[5] = 1.0;
    EXPECT_THROW(solve_volterra(TSourceProblem{bump(), kX0, FractionalOrder(0.5), trace}), NonZeroInitialTrace);
    EXPECT_THROW(solve_volterra(TSourceProblem{bump(), 1.0, FractionalOrder(0.5), TimeSeries::zeros(grid)}),
                 InvalidArgument);
    EXPECT_THROW(
        solve_volterra(TSourceProblem{bump(), kX0, FractionalOrder(0.5), TimeSeries::zeros(TimeGrid(1.0, 2))}),
        InvalidArgument);
}

TEST(SolveVolterra, Linearity) {
    const TimeGrid grid(1.0, 128);
    const auto r1 = TimeSeries::sample(grid, [](double t) { return 1.0 + t; });
    const auto r2 = TimeSeries::sample(grid, [](double t) { return std::cos(3.0 * t); });
    const auto p1 = problem(bump(), 0.4, r1);
    const auto p2 = problem(bump(), 0.4, r2);
    auto p12 = p1;
    p12.trace = 2.0 * p1.trace - 3.0 * p2.trace;
    const auto combined = solve_volterra(p12).value;
    const auto expected = 2.0 * solve_volterra(p1).value - 3.0 * solve_volterra(p2).value;
    EXPECT_LT((combined - expected).max_abs(), 1e-11 * expected.max_abs());
}

TEST(SolveVolterra, NoisyTraceIsMollified) {
    const TimeGrid grid(1.0, 256);
    const auto rho = TimeSeries::sample(grid, [](double t) { return 1.0 + t; });
    auto p = problem(bump(), 0.5, rho);
    p.trace = add_noise(p.trace, 1e-4, 7);
    p.trace[0] = 0.0;
    p.noise_level = 1e-4;
    const double smoothed = relative_l2_error(solve_volterra(p).value, rho);
    p.smoothing_width = 1;
    const double raw = relative_l2_error(solve_volterra(p).value, rho);
    EXPECT_LT(smoothed, raw);
    EXPECT_LT(smoothed, 0.1);
}

TEST(FixedPoint, ZeroDataStopsAtFirstIteration) {
    const TimeGrid grid(1.0, 64);
    const auto g = bump();
    const double K = fixed_point_bound(g, kX0, FractionalOrder(0.5), grid);
    const auto r = fixed_point_iterate(TSourceProblem{g, kX0, FractionalOrder(0.5), TimeSeries::zeros(grid)}, K, 20,
                                       1e-8, TimeSeries::zeros(grid));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_EQ(r.value.max_abs(), 0.0);
}

TEST(FixedPoint, AffineConvergesMonotonically) {
    const TimeGrid grid(1.0, 256);
    const auto rho = TimeSeries::sample(grid, [](double t) { return 1.0 + t; });
    const auto p = problem(bump(), 0.5, rho);
    const double K = fixed_point_bound(p.g, kX0, p.alpha, grid);
    const auto r = fixed_point_iterate(p, K, 50, 0.0, rho);
    ASSERT_EQ(r.error_history.size(), 50u);
    for (std::size_t m = 1; m < r.error_history.size(); ++m) {
        EXPECT_LE(r.error_history[m], r.error_history[m - 1]) << "iteration " << m + 1;
    }
    EXPECT_LE(r.error_history.back(), 1e-2);
}

TEST(FixedPoint, DoubledConstantNeedsAboutTwiceTheIterations) {
    const TimeGrid grid(1.0, 128);
    const auto rho = TimeSeries::sample(grid, [](double t) { return 1.0 + t; });
    const auto p = problem(bump(), 0.6, rho);
    const double K = fixed_point_bound(p.g, kX0, p.alpha, grid);
    auto iterations_to = [&](double k) {
        const auto r = fixed_point_iterate(p, k, 1000, 0.0, rho);
        for (std::size_t m = 0; m < r.error_history.size(); ++m) {
            if (r.error_history[m] <= 1e-3) return static_cast<double>(m + 1);
        }
        return 1e9;
    };
    const double ratio = iterations_to(2.0 * K) / iterations_to(K);
    EXPECT_GT(ratio, 1.6);
    EXPECT_LT(ratio, 2.4);
}

TEST(FixedPoint, RejectsBadConstants) {
    const TimeGrid grid(1.0, 32);
    const TSourceProblem p{bump(), kX0, FractionalOrder(0.5), TimeSeries::zeros(grid)};
    const double K = fixed_point_bound(p.g, kX0, p.alpha, grid);
    EXPECT_NEAR(K, eval_at(p.g, kX0), 1e-12);
    EXPECT_THROW(fixed_point_iterate(p, 0.5 * K, 10, 1e-6), InvalidArgument);
    EXPECT_THROW(fixed_point_iterate(p, 0.0, 10, 1e-6), NonPositiveParams);
    EXPECT_THROW(fixed_point_iterate(p, K, 0, 1e-6), InvalidArgument);
}

TEST(Lipschitz, SingleMember) {
    const TimeGrid grid(1.0, 64);
    const auto c = lipschitz_certificate(bump(), kX0, FractionalOrder(0.5), grid,
                                         {TimeSeries::sample(grid, [](double t) { return 1.0 + t; })});
    EXPECT_EQ(c.c_lo, c.c_hi);
    EXPECT_GT(c.c_lo, 0.0);
    EXPECT_EQ(c.ratios.size(), 1u);
}

TEST(Lipschitz, ScalingInvariance) {
    const TimeGrid grid(1.0, 64);
    const auto rho = TimeSeries::sample(grid, [](double t) { return 1.0 + t * t; });
    const auto c = lipschitz_certificate(bump(), kX0, FractionalOrder(0.5), grid, {rho, 7.5 * rho, -0.01 * rho});
    EXPECT_NEAR(c.c_hi / c.c_lo, 1.0, 1e-12);
}

TEST(Lipschitz, RandomFamilyStableUnderRefinement) {
    const double alpha = 0.5;
    const auto coarse = lipschitz_certificate(bump(), kX0, FractionalOrder(alpha), TimeGrid(1.0, 128),
                                              random_family(TimeGrid(1.0, 128), 20));
    const auto fine = lipschitz_certificate(bump(), kX0, FractionalOrder(alpha), TimeGrid(1.0, 512),
                                            random_family(TimeGrid(1.0, 512), 20));
    EXPECT_GT(coarse.c_lo, 0.0);
    EXPECT_TRUE(std::isfinite(coarse.c_hi));
    EXPECT_LT(std::abs(fine.c_lo / coarse.c_lo - 1.0), 0.1);
    EXPECT_LT(std::abs(fine.c_hi / coarse.c_hi - 1.0), 0.1);
    EXPECT_GE(coarse.constant(), coarse.c_hi);
    EXPECT_GE(coarse.constant(), 1.0 / coarse.c_lo);
}

TEST(Lipschitz, Errors) {
    const TimeGrid grid(1.0, 16);
    EXPECT_THROW(lipschitz_certificate(bump(), kX0, FractionalOrder(0.5), grid, {}), InvalidArgument);
    EXPECT_THROW(lipschitz_certificate(bump(), kX0, FractionalOrder(0.5), grid, {TimeSeries::zeros(grid)}),
                 InvalidArgument);
    EXPECT_THROW(lipschitz_certificate(SpectralField::mode(kDomain, 2), 0.5, FractionalOrder(0.5), grid,
                                       {TimeSeries::constant(grid, 1.0)}),
                 PointDegenerate);
}

TEST(SignChanges, Examples) {
    const TimeGrid grid(1.0, 200);
    EXPECT_EQ(count_sign_changes(TimeSeries::constant(grid, 1.0), 1e-12).sign_changes, 0u);
    const auto s2 = TimeSeries::sample(grid, [](double t) { return std::sin(2.0 * std::numbers::pi * t); });
    const auto s4 = TimeSeries::sample(grid, [](double t) { return std::sin(4.0 * std::numbers::pi * t); });
    EXPECT_EQ(count_sign_changes(s2, 1e-12).sign_changes, 1u);
    EXPECT_EQ(count_sign_changes(s4, 1e-12).sign_changes, 3u);
    // max |rho'| of sin(2 pi t) is 2 pi
    EXPECT_NEAR(count_sign_changes(s2, 1e-12).c1_bound, 2.0 * std::numbers::pi, 2e-3);
}

TEST(Injectivity, PointOutsideSupport) {
    // offset bump on (0.6, 0.9) observed at 0.3
    const auto g = make_g(GProfile{"offset-bump", 1, 0.6, 0.9, 1.0}, kDomain);
    // only the truncation tail reaches x0
    EXPECT_LT(std::abs(eval_at(g, 0.3)), 1e-3 * eval_at(g, 0.75));
    const TimeGrid grid(1.0, 128);
    const std::vector<TimeSeries> family{
        TimeSeries::constant(grid, 1.0),
        TimeSeries::sample(grid, [](double t) { return 1.0 + t; }),
        TimeSeries::sample(grid, [](double t) { return t * t; }),
        TimeSeries::sample(grid, [](double t) { return 1.0 - t + t * t; }),
    };
    std::vector<TimeSeries> traces;
    for (const auto& rho : family) traces.push_back(forward_trace(g, rho, 0.5, 0.3));
    for (std::size_t i = 0; i < traces.size(); ++i) {
        for (std::size_t j = i + 1; j < traces.size(); ++j) {
            EXPECT_GT((traces[i] - traces[j]).l1_norm(), 1e-6) << i << " vs " << j;
        }
    }
}

TEST(MovingAverage, Basics) {
    const TimeGrid grid(1.0, 10);
    const auto lin = TimeSeries::sample(grid, [](double t) { return 3.0 * t; });
    const auto m = moving_average(lin, 5);
    for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_NEAR(m[k], lin[k], 1e-14);
    EXPECT_THROW(moving_average(lin, 0), InvalidArgument);
    const auto same = moving_average(lin, 1);
    for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_EQ(same[k], lin[k]);
}

}  // namespace
}  // namespace fracsource
