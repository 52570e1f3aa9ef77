#pragma once

namespace gfou {

/// Gamma function on the positive real axis (and, via reflection, on the
/// negative non-integer axis). Lanczos approximation, relative error
/// below 1e-12 on (0, 30).
double gamma_fn(double x);

double log_gamma(double x);

/// Beta function B(a, b) = Gamma(a)Gamma(b) / Gamma(a+b), a, b > 0.
double beta_fn(double a, double b);

/// Standard normal distribution function Phi(z).
double normal_cdf(double z);

/// Normal distribution function with mean 0 and standard deviation sd.
double normal_cdf(double z, double sd);

/// Standard normal quantile (inverse of Phi), Wichura's AS 241 PPND16.
/// Accurate to full double precision for p in (0, 1).
double normal_quantile(double p);

} // namespace gfou
