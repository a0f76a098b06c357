#pragma once

namespace rpaths {

// Standard normal density.
double gaussian_pdf(double x);

// Phi(x), computed through the complementary error function so both tails
// keep full relative accuracy.
double gaussian_cdf(double x);

// Upper tail 1 - Phi(x). Relative accuracy ~1e-15 for x <= 30 via erfc;
// asymptotic series beyond (where erfc would underflow).
double gaussian_tail(double x);

// ln(1 - Phi(x)), finite for every finite x (and for x = +inf returns -inf).
double log_gaussian_tail(double x);

// Phi^{-1}(p) for p in (0,1). Rational initial guess (Acklam) refined by one
// Newton step on the accurate CDF. Throws std::invalid_argument outside (0,1).
double gaussian_quantile(double p);

// Inverse of the upper tail: x with 1 - Phi(x) = q, q in (0,1). Equal to
// -gaussian_quantile(q); kept separate because tail-mass arguments near 0 are
// where the samplers live.
double gaussian_upper_quantile(double q);

}  // namespace rpaths
