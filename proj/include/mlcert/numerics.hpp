// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scalar special functions used by the certifier.
//
// Accuracy (double precision):
//   gaussian_cdf                 absolute error <= 1e-12 on finite input
//   gaussian_quantile            |cdf(quantile(p)) - p| <= 1e-10 on [1e-12, 1 - 1e-12]
//   regularized_incomplete_beta  relative error <= 1e-10 for shapes up to ~1e5
//   beta_quantile                absolute error in x <= 1e-10
//
// Boundary behavior is saturating rather than throwing: quantile(0) = -inf,
// quantile(1) = +inf, cdf(-inf) = 0, cdf(+inf) = 1. Infinities propagate
// through the shifts applied by the certifier, e.g. cdf(quantile(0) - r) = 0.

namespace mlcert {

/// Standard Gaussian CDF. Throws DomainError on NaN.
double gaussian_cdf(double z);

/// Upper tail 1 - cdf(z), accurate for large z.
double gaussian_ccdf(double z);

/// Inverse of gaussian_cdf. Throws DomainError unless 0 <= p <= 1.
double gaussian_quantile(double p);

/// I_x(a, b). Throws DomainError unless a > 0, b > 0 and 0 <= x <= 1.
double regularized_incomplete_beta(double x, double a, double b);

/// The x in [0, 1] with I_x(a, b) = q; 0 when q = 0 and 1 when q = 1.
double beta_quantile(double q, double a, double b);

}  // namespace mlcert
