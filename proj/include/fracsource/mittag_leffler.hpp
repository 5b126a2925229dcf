#pragma once

#include <memory>
#include <span>

namespace fracsource {

/// Parameters (alpha, beta) of the two-parameter Mittag-Leffler function E_{alpha,beta}.
/// Requires 0 < alpha < 2 and beta > 0.
class MLParams {
public:
    MLParams(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }

private:
    double alpha_;
    double beta_;
};

/// Evaluator for E_{alpha,beta}(z) on the negative real axis (and 0 < z <= 1).
///
/// Construction precomputes the series coefficients once, so a single instance
/// should be reused across many arguments. Instances are immutable after
/// construction and may be shared between threads.
///
/// Evaluation regimes, selected by X = |z|^(1/alpha):
///   - X <= 3: power series in double precision;
///   - 3 < X <= 40: power series in quad precision (the terms reach e^X before
///     cancelling down to O(1/|z|));
///   - X > 40: asymptotic expansion -sum_k z^-k / Gamma(beta - alpha k), plus the
///     exponential contributions that exist on the negative axis when alpha >= 1.
class MittagLeffler {
public:
    static constexpr double kDoubleSeriesLimit = 3.0;
    static constexpr double kQuadSeriesLimit = 40.0;
    static constexpr std::size_t kMaxTerms = 10000;

    explicit MittagLeffler(MLParams params);

    /// E_{alpha,beta}(z) for finite z <= 1.
    double operator()(double z) const;

    const MLParams& params() const noexcept { return params_; }

    /// |z| beyond which operator() switches to the asymptotic expansion.
    double asymptotic_threshold() const noexcept;

    /// Power series summed in quad precision, regardless of |z|.
    /// Throws SeriesNotConverged if the terms do not fall below the stopping
    /// tolerance within kMaxTerms.
    double power_series(double z) const;

    /// Asymptotic expansion for z < 0, regardless of |z|.
    double asymptotic(double z) const;

private:
    struct Tables;

    double double_series(double z) const;

    MLParams params_;
    std::shared_ptr<Tables> tables_;
};

/// E_{alpha,beta}(z). Rejects non-finite z and z > 1.
double ml_eval(const MLParams& params, double z);

/// max over the grid of |E_{alpha,beta}(-eta)| * (1 + eta): the empirical
/// constant in |E_{alpha,beta}(-eta)| <= C / (1 + eta).
double ml_decay_constant(const MLParams& params, std::span<const double> eta_grid);

}  // namespace fracsource
