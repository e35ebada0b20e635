#pragma once

#include "besseline/eval_result.hpp"

namespace besseline {

// Gamma function. Relative error <= 1e-14 for |u| <= 50.
// Throws DomainError at non-positive integers, OverflowSignal past u ~ 171.62.
EvalResult gamma(double u);

// 1/Gamma(u). Entire; returns 0 at the poles of Gamma. No error signals.
double rgamma(double u) noexcept;

// sin(pi*u) with exact argument reduction (no pi rounding error amplification).
double sinpi(double u) noexcept;

// Modified Bessel function of the first kind I_nu(x), x > 0.
// scaled variant returns e^{-x} I_nu(x).
// Relative error <= 1e-12 for 1e-6 <= x <= 300, |nu| <= 30.
EvalResult besseli(double nu, double x);
EvalResult besseli_scaled(double nu, double x);

// Modified Bessel function of the second kind K_nu(x), x > 0.
// scaled variant returns e^{x} K_nu(x). Parity K_{-nu} = K_nu is exact.
EvalResult besselk(double nu, double x);
EvalResult besselk_scaled(double nu, double x);

struct Hyp1F2Params {
    double a1 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double z = 0.0;  // z >= 0: all terms positive once coefficients are
};

// Generalized hypergeometric 1F2(a1; b1, b2; z) by compensated direct
// summation. Stops when the terms are decreasing and the next term is below
// 1e-17 of the accumulated sum; abs_error_bound = 2x the last term.
EvalResult hyp1f2(const Hyp1F2Params& p);

// log(prefactor) + 1F2 sum evaluated as value = exp(log_prefactor) * sum with
// the exponential folded in term by term, for sums whose prefactor would
// overflow alone. Returns value = exp(log_prefactor) * 1F2(...).
EvalResult hyp1f2_log_scaled(const Hyp1F2Params& p, double log_prefactor);

}  // namespace besseline
