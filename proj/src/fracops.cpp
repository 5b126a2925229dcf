#include "fracsource/fracops.hpp"

#include "fracsource/errors.hpp"
#include "fracsource/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace fracsource {

namespace {

void require_order(double order) {
    if (!(order > 0.0 && order <= 1.0)) {
        throw InvalidArgument("integral order must lie in (0, 1], got " + std::to_string(order));
    }
}

// left[j], right[j] = int_j^{j+1} u^(p-1) (j+1-u) du and int_j^{j+1} u^(p-1) (u-j) du.
// For j >= 8 both are evaluated from their expansions in 1/j, which avoids the
// O(j^2) cancellation of the closed forms.
ConvolutionWeights unit_power_weights(double p, std::size_t n) {
    ConvolutionWeights w = ConvolutionWeights::zeros(n);
    const double denom = p * (p + 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double jd = static_cast<double>(j);
        if (j < 8) {
            const double a = std::pow(jd + 1.0, p + 1.0);
            const double b = jd == 0.0 ? 0.0 : std::pow(jd, p);
            w.left[j] = (a - b * (jd + 1.0 + p)) / denom;
            w.right[j] = (std::pow(jd + 1.0, p) * (p - jd) + b * jd) / denom;
            continue;
        }
        // (1+u)^(p+1) - 1 - (p+1) u and (1+u)^p (p u - 1) + 1 as series in u = 1/j
        const double u = 1.0 / jd;
        double left = 0.0;
        double right = 0.0;
        double binom_p1 = (p + 1.0) * p / 2.0;  // C(p+1, 2)
        double binom_p_prev = p;                // C(p, 1)
        double binom_p = p * (p - 1.0) / 2.0;   // C(p, 2)
        double um = u * u;
        for (int m = 2; m < 40; ++m) {
            const double dl = binom_p1 * um;
            const double dr = (p * binom_p_prev - binom_p) * um;
            left += dl;
            right += dr;
            if (std::abs(dl) < 1e-18 * std::abs(left) && std::abs(dr) < 1e-18 * std::abs(right)) break;
            const double md = static_cast<double>(m);
            binom_p1 *= (p + 1.0 - md) / (md + 1.0);
            binom_p_prev = binom_p;
            binom_p *= (p - md) / (md + 1.0);
            um *= u;
        }
        const double scale = std::pow(jd, p + 1.0) / denom;
        w.left[j] = scale * left;
        w.right[j] = scale * right;
    }
    return w;
}

}  // namespace

ConvolutionWeights ConvolutionWeights::zeros(std::size_t n_intervals) {
    return ConvolutionWeights{std::vector<double>(n_intervals, 0.0),
                              std::vector<double>(n_intervals, 0.0)};
}

void ConvolutionWeights::add_scaled(const ConvolutionWeights& other, double c) {
    if (other.left.size() != left.size()) throw InvalidArgument("convolution weight size mismatch");
    for (std::size_t j = 0; j < left.size(); ++j) {
        left[j] += c * other.left[j];
        right[j] += c * other.right[j];
    }
}

TimeSeries convolve(const ConvolutionWeights& weights, const TimeSeries& f) {
    const std::size_t n = f.grid().n_steps();
    if (weights.left.size() != n) throw InvalidArgument("convolution weights do not match grid");
    std::vector<double> out(n + 1, 0.0);
    const auto v = f.values();
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            acc += weights.left[j] * v[k - j] + weights.right[j] * v[k - j - 1];
        }
        out[k] = acc;
    }
    return TimeSeries(f.grid(), std::move(out));
}

double convolve_final(const ConvolutionWeights& weights, const TimeSeries& f) {
    const std::size_t n = f.grid().n_steps();
    if (weights.left.size() != n) throw InvalidArgument("convolution weights do not match grid");
    const auto v = f.values();
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        acc += weights.left[j] * v[n - j] + weights.right[j] * v[n - j - 1];
    }
    return acc;
}

TimeSeries caputo_l1(const TimeSeries& f, FractionalOrder alpha) {
    const TimeGrid& grid = f.grid();
    const std::size_t n = grid.n_steps();
    const double a = alpha.value();
    std::vector<double> b(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double jd = static_cast<double>(j);
        b[j] = std::pow(jd + 1.0, 1.0 - a) - std::pow(jd, 1.0 - a);
    }
    const double scale = std::pow(grid.step(), -a) * reciprocal_gamma(2.0 - a);
    const auto v = f.values();
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += b[j] * (v[k - j] - v[k - j - 1]);
        out[k] = scale * acc;
    }
    return TimeSeries(grid, std::move(out));
}

TimeSeries weakly_singular_convolve(double kernel_power, const TimeSeries& smooth_factor,
                                    const TimeSeries& f) {
    require_order(kernel_power);
    if (!(smooth_factor.grid() == f.grid())) {
        throw InvalidArgument("weakly_singular_convolve: grids differ");
    }
    const TimeGrid& grid = f.grid();
    const std::size_t n = grid.n_steps();
    const ConvolutionWeights w = unit_power_weights(kernel_power, n);
    const double scale = std::pow(grid.step(), kernel_power);
    const auto ks = smooth_factor.values();
    const auto v = f.values();
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            acc += w.left[j] * ks[j] * v[k - j] + w.right[j] * ks[j + 1] * v[k - j - 1];
        }
        out[k] = scale * acc;
    }
    return TimeSeries(grid, std::move(out));
}

TimeSeries rl_integral_forward(const TimeSeries& f, double order) {
    require_order(order);
    return weakly_singular_convolve(order, TimeSeries::constant(f.grid(), reciprocal_gamma(order)), f);
}

namespace {

// Adds weights on f_1..f_m to every node of rule(f) so that the result is
// exact on 1, t and t^sigma for sigma in singular (the rule must already be
// exact on 1 and t). exact(sigma, t) is the target operator applied to t^sigma.
TimeSeries with_starting_corrections(const TimeSeries& f, std::span<const double> singular,
                                     const std::function<TimeSeries(const TimeSeries&)>& rule,
                                     const std::function<double(double, double)>& exact) {
    const TimeGrid& grid = f.grid();
    if (singular.empty()) return rule(f);
    for (double sigma : singular) {
        if (!(sigma > 0.0) || sigma == std::round(sigma)) {
            throw InvalidArgument("starting-correction exponents must be positive and non-integer");
        }
    }
    std::vector<double> exponents{0.0, 1.0};
    exponents.insert(exponents.end(), singular.begin(), singular.end());
    const std::size_t m = exponents.size();
    if (m > grid.n_steps()) throw InvalidArgument("more starting corrections than grid steps");
    const std::size_t n = grid.n_steps();
    const double tau = grid.step();
    // defect[l][k] = exact minus rule on t^sigma_l at t_k
    std::vector<std::vector<double>> defect(m);
    for (std::size_t l = 0; l < m; ++l) {
        const double sigma = exponents[l];
        if (sigma == 0.0 || sigma == 1.0) {
            defect[l].assign(n + 1, 0.0);
            continue;
        }
        const TimeSeries approx = rule(TimeSeries::sample(grid, [&](double t) { return std::pow(t, sigma); }));
        defect[l].resize(n + 1);
        defect[l][0] = 0.0;
        for (std::size_t k = 1; k <= n; ++k) defect[l][k] = exact(sigma, grid.node(k)) - approx[k];
    }
    // A[l][i] = t_{i+1}^sigma_l; the corrections w solve A w = defect node by node
    std::vector<double> a(m * m);
    for (std::size_t l = 0; l < m; ++l) {
        for (std::size_t i = 0; i < m; ++i) {
            a[l * m + i] = std::pow(static_cast<double>(i + 1) * tau, exponents[l]);
        }
    }
    // LU with partial pivoting, reused for every node
    std::vector<std::size_t> piv(m);
    for (std::size_t i = 0; i < m; ++i) piv[i] = i;
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t best = c;
        for (std::size_t r = c + 1; r < m; ++r) {
            if (std::abs(a[r * m + c]) > std::abs(a[best * m + c])) best = r;
        }
        if (a[best * m + c] == 0.0) throw InvalidArgument("starting-correction exponents must be distinct");
        if (best != c) {
            for (std::size_t j = 0; j < m; ++j) std::swap(a[c * m + j], a[best * m + j]);
            std::swap(piv[c], piv[best]);
        }
        for (std::size_t r = c + 1; r < m; ++r) {
            a[r * m + c] /= a[c * m + c];
            for (std::size_t j = c + 1; j < m; ++j) a[r * m + j] -= a[r * m + c] * a[c * m + j];
        }
    }
    TimeSeries out = rule(f);
    std::vector<double> w(m);
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t r = 0; r < m; ++r) {
            double v = defect[piv[r]][k];
            for (std::size_t j = 0; j < r; ++j) v -= a[r * m + j] * w[j];
            w[r] = v;
        }
        for (std::size_t r = m; r-- > 0;) {
            double v = w[r];
            for (std::size_t j = r + 1; j < m; ++j) v -= a[r * m + j] * w[j];
            w[r] = v / a[r * m + r];
        }
        double corr = 0.0;
        for (std::size_t i = 0; i < m; ++i) corr += w[i] * f[i + 1];
        out[k] += corr;
    }
    return out;
}

}  // namespace

TimeSeries rl_integral_forward(const TimeSeries& f, double order, std::span<const double> singular) {
    require_order(order);
    return with_starting_corrections(
        f, singular, [&](const TimeSeries& x) { return rl_integral_forward(x, order); },
        [&](double sigma, double t) {
            return gamma_fn(sigma + 1.0) * reciprocal_gamma(sigma + 1.0 + order) * std::pow(t, sigma + order);
        });
}

TimeSeries caputo_l1(const TimeSeries& f, FractionalOrder alpha, std::span<const double> singular) {
    const double a = alpha.value();
    return with_starting_corrections(
        f, singular, [&](const TimeSeries& x) { return caputo_l1(x, alpha); },
        [&](double sigma, double t) {
            return gamma_fn(sigma + 1.0) * reciprocal_gamma(sigma + 1.0 - a) * std::pow(t, sigma - a);
        });
}

TimeSeries rl_integral_backward(const TimeSeries& f, double order) {
    return rl_integral_forward(f.reversed(), order).reversed();
}

MittagLefflerKernel::MittagLefflerKernel(double alpha, double beta)
    : alpha_(alpha),
      beta_(beta),
      kernel_(MLParams(alpha, beta)),
      first_primitive_(MLParams(alpha, beta + 1.0)),
      second_primitive_(MLParams(alpha, beta + 2.0)) {}

double MittagLefflerKernel::value(double lambda, double s) const {
    if (!(s > 0.0)) throw InvalidArgument("kernel evaluated at s <= 0");
    return std::pow(s, beta_ - 1.0) * kernel_(-lambda * std::pow(s, alpha_));
}

ConvolutionWeights MittagLefflerKernel::weights(double lambda, const TimeGrid& grid) const {
    if (!(lambda >= 0.0)) throw InvalidArgument("kernel rate lambda must be >= 0");
    const std::size_t n = grid.n_steps();
    const double tau = grid.step();
    // P1(s) = int_0^s K, P2(s) = int_0^s (s - r) K(r) dr
    std::vector<double> p1(n + 1, 0.0);
    std::vector<double> p2(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        const double s = grid.node(j);
        const double z = -lambda * std::pow(s, alpha_);
        p1[j] = std::pow(s, beta_) * first_primitive_(z);
        p2[j] = std::pow(s, beta_ + 1.0) * second_primitive_(z);
    }
    ConvolutionWeights w = ConvolutionWeights::zeros(n);
    for (std::size_t j = 0; j < n; ++j) {
        // int_{s_j}^{s_{j+1}} (s_{j+1} - r) K(r) dr = P2(s_{j+1}) - P2(s_j) - tau P1(s_j)
        const double left = (p2[j + 1] - p2[j] - tau * p1[j]) / tau;
        w.left[j] = left;
        w.right[j] = (p1[j + 1] - p1[j]) - left;
    }
    return w;
}

}  // namespace fracsource
