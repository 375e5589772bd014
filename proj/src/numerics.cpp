// SPDX-License-Identifier: Apache-2.0
#include "mlcert/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mlcert/errors.hpp"

namespace mlcert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// lgamma without touching the global signgam.
double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

void check_shapes(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("beta shape parameters must be positive and finite (a=" + std::to_string(a) +
                      ", b=" + std::to_string(b) + ")");
  }
}

// Continued fraction for I_x(a, b), modified Lentz. Converges fast for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 100000;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) return h;
  }
  return h;
}

// x^a (1-x)^b / (a B(a, b)) evaluated in log space.
double beta_prefix(double x, double a, double b) {
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  return std::exp(log_front) / a;
}

double beta_log_density(double x, double a, double b) {
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b);
}

}  // namespace

double gaussian_cdf(double z) {
  if (std::isnan(z)) throw DomainError("gaussian_cdf: NaN argument");
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double gaussian_ccdf(double z) {
  if (std::isnan(z)) throw DomainError("gaussian_ccdf: NaN argument");
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

// Wichura, AS241 (PPND16). Relative accuracy about 1e-16.
double gaussian_quantile(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw DomainError("gaussian_quantile: probability outside [0, 1]: " + std::to_string(p));
  }
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }

  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
               1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
               0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
               0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
               7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double regularized_incomplete_beta(double x, double a, double b) {
  check_shapes(a, b);
  if (std::isnan(x) || x < 0.0 || x > 1.0) {
    throw DomainError("regularized_incomplete_beta: x outside [0, 1]: " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  // Symmetry I_x(a, b) = 1 - I_{1-x}(b, a) keeps the fraction in its fast regime.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return beta_prefix(x, a, b) * beta_continued_fraction(x, a, b);
  }
  const double y = 1.0 - x;
  const double tail = beta_prefix(y, b, a) * beta_continued_fraction(y, b, a);
  return 1.0 - tail;
}

double beta_quantile(double q, double a, double b) {
  check_shapes(a, b);
  if (std::isnan(q) || q < 0.0 || q > 1.0) {
    throw DomainError("beta_quantile: probability outside [0, 1]: " + std::to_string(q));
  }
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;

  // Safeguarded Newton: keep a bracket [lo, hi] around the root and fall back
  // to bisection whenever the Newton step leaves it.
  double lo = 0.0;
  double hi = 1.0;
  double x = a / (a + b);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = regularized_incomplete_beta(x, a, b) - q;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density = std::exp(beta_log_density(x, a, b));
    double next = x - f / density;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 || hi - lo <= 1e-16) return next;
    x = next;
  }
  return x;
}

}  // namespace mlcert
