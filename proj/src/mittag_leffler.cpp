#include "fracsource/mittag_leffler.hpp"

#include "fracsource/errors.hpp"
#include "fracsource/gamma.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

namespace fracsource {

__extension__ typedef __float128 quad;

namespace {

constexpr double kStopRatio = 1e-17;

quad quad_abs(quad x) { return x < 0 ? -x : x; }

// 1/Gamma(alpha k + beta) with the argument formed in quad precision: the
// product alpha * k is exact there, which keeps the rounding of the argument
// consistent across terms whose magnitudes reach e^X before cancelling.
quad quad_reciprocal_gamma(double alpha, std::size_t k, double beta) {
    const quad x = static_cast<quad>(alpha) * static_cast<quad>(k) + static_cast<quad>(beta);
    if (x < 1700) return 1 / tgammaq(x);
    return expq(-lgammaq(x));
}

std::size_t table_length(double alpha, double x_limit) {
    // |term_k| ~ X^(alpha k) / Gamma(alpha k + beta) is below 1e-22 once alpha k > 4 X + 10
    const double n = std::ceil((4.0 * x_limit + 10.0) / alpha) + 2.0;
    return static_cast<std::size_t>(std::min(n, static_cast<double>(MittagLeffler::kMaxTerms) + 1));
}

}  // namespace

MLParams::MLParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw InvalidArgument("Mittag-Leffler order alpha must lie in (0, 2), got " +
                              short_number(alpha));
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw InvalidArgument("Mittag-Leffler parameter beta must be positive, got " +
                              short_number(beta));
    }
}

struct MittagLeffler::Tables {
    std::vector<double> double_coeffs;
    mutable std::once_flag quad_once;
    mutable std::vector<quad> quad_coeffs;
};

MittagLeffler::MittagLeffler(MLParams params)
    : params_(params), tables_(std::make_shared<Tables>()) {
    const std::size_t n = table_length(params_.alpha(), kDoubleSeriesLimit);
    tables_->double_coeffs.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        tables_->double_coeffs[k] =
            reciprocal_gamma(params_.alpha() * static_cast<double>(k) + params_.beta());
    }
}

double MittagLeffler::asymptotic_threshold() const noexcept {
    return std::pow(kQuadSeriesLimit, params_.alpha());
}

double MittagLeffler::operator()(double z) const {
    if (!std::isfinite(z)) throw InvalidArgument("Mittag-Leffler argument must be finite");
    if (z > 1.0) {
        throw InvalidArgument("Mittag-Leffler argument must satisfy z <= 1, got " +
                              short_number(z));
    }
    const double alpha = params_.alpha();
    if (alpha == 1.0 && params_.beta() == 1.0) return std::exp(z);
    if (z >= 0.0) return double_series(z);
    const double x = std::pow(-z, 1.0 / alpha);
    if (x <= kDoubleSeriesLimit) return double_series(z);
    if (x <= kQuadSeriesLimit) return power_series(z);
    return asymptotic(z);
}

double MittagLeffler::double_series(double z) const {
    const auto& coeffs = tables_->double_coeffs;
    // Neumaier summation
    double sum = 0.0;
    double carry = 0.0;
    double power = 1.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double term = coeffs[k] * power;
        const double t = sum + term;
        carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        if (k + 1 == coeffs.size()) break;
        power *= z;
        const double next = coeffs[k + 1] * power;
        if (std::abs(next) < kStopRatio * std::abs(sum + carry) && std::abs(next) <= std::abs(term)) {
            return sum + carry;
        }
    }
    // table exhausted: continue in quad precision with on-the-fly coefficients
    return power_series(z);
}

double MittagLeffler::power_series(double z) const {
    const double alpha = params_.alpha();
    const double beta = params_.beta();
    std::call_once(tables_->quad_once, [&] {
        const std::size_t n = table_length(alpha, kQuadSeriesLimit);
        tables_->quad_coeffs.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            tables_->quad_coeffs[k] = quad_reciprocal_gamma(alpha, k, beta);
        }
    });
    const auto& coeffs = tables_->quad_coeffs;
    auto coeff = [&](std::size_t k) -> quad {
        if (k < coeffs.size()) return coeffs[k];
        return quad_reciprocal_gamma(alpha, k, beta);
    };

    const quad qz = z;
    quad power = 1;
    quad sum = 0;
    quad term = coeff(0);
    for (std::size_t k = 0; k < kMaxTerms; ++k) {
        sum += term;
        power *= qz;
        const quad next = coeff(k + 1) * power;
        if (quad_abs(next) < kStopRatio * quad_abs(sum) && quad_abs(next) <= quad_abs(term)) {
            return static_cast<double>(sum);
        }
        term = next;
    }
    throw SeriesNotConverged("Mittag-Leffler power series did not converge within " +
                             std::to_string(kMaxTerms) + " terms (alpha=" + short_number(alpha) +
                             ", z=" + short_number(z) + ")");
}

double MittagLeffler::asymptotic(double z) const {
    if (!(z < 0.0)) throw InvalidArgument("asymptotic expansion requires z < 0");
    const double alpha = params_.alpha();
    const double beta = params_.beta();
    const double eta = -z;
    const double log_eta = std::log(eta);
    const double x = std::pow(eta, 1.0 / alpha);

    // (-1)^(k+1) eta^-k / Gamma(beta - alpha k), written through the reflection
    // formula once beta - alpha k < 1/2 so that no intermediate overflows.
    auto envelope_and_factor = [&](std::size_t k, double& log_env, double& factor) {
        const double arg = beta - alpha * static_cast<double>(k);
        if (arg >= 0.5) {
            log_env = -log_abs_gamma(arg);
            factor = 1.0;
        } else {
            log_env = log_abs_gamma(1.0 - arg) - std::log(std::numbers::pi);
            factor = sin_pi(arg);
        }
        log_env -= static_cast<double>(k) * log_eta;
    };

    double sum = 0.0;
    double log_env = 0.0;
    double factor = 0.0;
    envelope_and_factor(1, log_env, factor);
    for (std::size_t k = 1; k <= kMaxTerms; ++k) {
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        sum += sign * factor * std::exp(log_env);

        double next_log_env = 0.0;
        double next_factor = 0.0;
        envelope_and_factor(k + 1, next_log_env, next_factor);
        const bool negligible = sum != 0.0 && next_log_env < std::log(kStopRatio * std::abs(sum));
        // the envelope is minimal near alpha k = X; growth before X/2 is a
        // transient from the reflection branch switch
        const bool diverging = next_log_env > log_env && alpha * static_cast<double>(k + 1) > 0.5 * x;
        if (negligible || diverging) break;
        if (k == kMaxTerms) {
            throw SeriesNotConverged("Mittag-Leffler asymptotic expansion did not settle");
        }
        log_env = next_log_env;
        factor = next_factor;
    }

    if (alpha >= 1.0) {
        // exponential contributions of the branches s = eta^(1/alpha) e^(+-i pi/alpha)
        const double theta = std::numbers::pi / alpha;
        const double amplitude = std::pow(x, 1.0 - beta) * std::exp(x * std::cos(theta));
        const double phase = (1.0 - beta) * theta + x * std::sin(theta);
        const double weight = alpha == 1.0 ? 1.0 : 2.0 / alpha;
        sum += weight * amplitude * std::cos(phase);
    }
    return sum;
}

double ml_eval(const MLParams& params, double z) { return MittagLeffler(params)(z); }

double ml_decay_constant(const MLParams& params, std::span<const double> eta_grid) {
    if (eta_grid.empty()) throw InvalidArgument("ml_decay_constant: eta grid is empty");
    const MittagLeffler ml(params);
    double c = 0.0;
    for (const double eta : eta_grid) {
        if (!(eta >= 0.0) || !std::isfinite(eta)) {
            throw InvalidArgument("ml_decay_constant: grid entries must be finite and >= 0");
        }
        c = std::max(c, std::abs(ml(-eta)) * (1.0 + eta));
    }
    return c;
}

}  // namespace fracsource
