#pragma once

#include "fracsource/mittag_leffler.hpp"
#include "fracsource/time_series.hpp"

#include <span>
#include <vector>

namespace fracsource {

/// L1-scheme Caputo derivative of order alpha at every node k >= 1; node 0 is
/// reported as 0. Accuracy O(tau^(2 - alpha)) for f in C^2[0, T].
TimeSeries caputo_l1(const TimeSeries& f, FractionalOrder alpha);

/// caputo_l1 with starting corrections on f_1..f_m that keep the scheme exact
/// on 1 and t and make it exact on t^sigma, sigma in singular. Restores the
/// 2 - alpha order for f = smooth + sum_i c_i t^sigma_i.
TimeSeries caputo_l1(const TimeSeries& f, FractionalOrder alpha, std::span<const double> singular);

/// Forward Riemann-Liouville integral J_{0+}^order f, 0 < order <= 1, by the
/// product-trapezoidal rule (exact for piecewise-linear f).
TimeSeries rl_integral_forward(const TimeSeries& f, double order);

/// rl_integral_forward with starting corrections: weights on f_1..f_m are
/// added at every node so that the rule stays exact for 1 and t and becomes
/// exact for t^sigma, sigma in singular (m = singular.size() + 2). Restores the
/// smooth-data convergence order for f = smooth + sum_i c_i t^sigma_i.
/// Exponents must be positive, non-integer and distinct; m <= n_steps.
TimeSeries rl_integral_forward(const TimeSeries& f, double order, std::span<const double> singular);

/// Backward Riemann-Liouville integral J_{T-}^order f, computed as
/// reverse(forward(reverse(f))).
TimeSeries rl_integral_backward(const TimeSeries& f, double order);

/// t_k -> int_0^{t_k} s^(p-1) k_s(s) f(t_k - s) ds with 0 < p <= 1: the product
/// k_s(s_j) f(t_k - s_j) is interpolated linearly on each subinterval and
/// integrated exactly against s^(p-1).
TimeSeries weakly_singular_convolve(double kernel_power, const TimeSeries& smooth_factor,
                                    const TimeSeries& f);

/// Weights of int_0^{t_k} K(s) f(t_k - s) ds for piecewise-linear f:
/// out_k = sum_{j<k} left[j] f_{k-j} + right[j] f_{k-j-1}, where left/right[j]
/// integrate K against the hat functions of [s_j, s_{j+1}].
struct ConvolutionWeights {
    std::vector<double> left;
    std::vector<double> right;

    static ConvolutionWeights zeros(std::size_t n_intervals);
    /// this += c * other
    void add_scaled(const ConvolutionWeights& other, double c);
};

TimeSeries convolve(const ConvolutionWeights& weights, const TimeSeries& f);

/// Value at t = T only: sum_{j<n} left[j] f_{n-j} + right[j] f_{n-j-1}.
double convolve_final(const ConvolutionWeights& weights, const TimeSeries& f);

/// Kernels K(s) = s^(beta-1) E_{alpha,beta}(-lambda s^alpha) integrated exactly:
/// int_0^s K = s^beta E_{alpha,beta+1}(-lambda s^alpha) and
/// int_0^s (s - r) K(r) dr = s^(beta+1) E_{alpha,beta+2}(-lambda s^alpha).
/// The kernel's own boundary-layer behaviour at s = 0 is therefore resolved
/// on any grid; only f is interpolated.
class MittagLefflerKernel {
public:
    MittagLefflerKernel(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }

    /// The E_{alpha,beta} evaluator inside K.
    const MittagLeffler& evaluator() const noexcept { return kernel_; }

    /// K(s) for s > 0.
    double value(double lambda, double s) const;

    /// Product-integration weights on the grid for a given lambda >= 0.
    ConvolutionWeights weights(double lambda, const TimeGrid& grid) const;

private:
    double alpha_;
    double beta_;
    MittagLeffler kernel_;
    MittagLeffler first_primitive_;
    MittagLeffler second_primitive_;
};

}  // namespace fracsource
