#pragma once

namespace fracsource {

/// sin(pi * x) with exact zeros at the integers.
double sin_pi(double x);

/// Gamma function (Lanczos approximation, reflection for x < 1/2).
/// Returns +-inf at the poles and on overflow.
double gamma_fn(double x);

/// log|Gamma(x)|.
double log_abs_gamma(double x);

/// 1/Gamma(x); zero at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);

}  // namespace fracsource
