#pragma once

namespace priornet {

/// Natural log of the Gamma function for x > 0.
/// Argument is shifted upward by the recurrence Gamma(x+1) = x Gamma(x)
/// until the Stirling series applies; series truncation error is below
/// 1e-12 over [1e-3, 1e6].
/// Throws std::domain_error for non-positive or non-finite x.
double ln_gamma(double x);

/// Digamma psi(x) = d/dx ln Gamma(x) for x > 0, same shift-and-series
/// scheme as ln_gamma. Throws std::domain_error for non-positive or
/// non-finite x.
double digamma(double x);

}  // namespace priornet
