#pragma once

#include "besseline/eval_result.hpp"

namespace besseline {

// Parameter tuple (nu, n, gamma, x) shared by the integral families and the
// bound evaluators. Validity ranges are checked per operation.
struct Params {
    double nu = 0.0;
    double n = 0.0;
    double gamma = 0.0;
    double x = 1.0;
};

enum class IntegralFamily { I, K };

struct IntegralSpec {
    IntegralFamily family = IntegralFamily::I;
    Params params;
    double rel_tol = 1e-10;  // clamped to [1e-14, 1e-3]
};

// integral over (0, x] of e^{-gamma t} I_{nu+n}(t) / t^nu dt.
// Requires n > -1 (integrand ~ t^n at 0). gamma may be any finite real.
EvalResult integral_i(const Params& p, double rel_tol = 1e-10);

// integral over [x, infinity) of e^{gamma t} K_{nu+n}(t) / t^nu dt.
// Requires gamma < 1, or gamma == 1 with nu > 1/2 (algebraic-decay tail).
EvalResult integral_k(const Params& p, double rel_tol = 1e-10);

EvalResult evaluate(const IntegralSpec& spec);

namespace closed_form {

// integral over (0, x] of I_nu(t)/t^nu dt, nu > -1:
//   x / (2^nu Gamma(nu+1)) * 1F2(1/2; 3/2, nu+1; x^2/4)
EvalResult integral_i_zero_tilt(double nu, double x);

// Antiderivative of K_nu(t)/t^nu (integration constant unspecified; use only
// in differences). Valid for nu < 3/2, nu not an integer, nu != 1/2.
EvalResult antiderivative_k_zero_tilt(double nu, double x);

// integral over (0, x] of e^{-t} I_nu(t)/t^nu dt, nu not in {1/2, 0, -1, ...}:
//   2^{1-nu}/((2nu-1)Gamma(nu)) - e^{-x} x^{1-nu} (I_nu(x)+I_{nu-1}(x))/(2nu-1)
EvalResult integral_i_unit_tilt(double nu, double x);

// integral over [x, infinity) of e^{t} K_nu(t)/t^nu dt, nu > 1/2:
//   e^{x} x^{1-nu} (K_nu(x)+K_{nu-1}(x)) / (2nu-1)
EvalResult integral_k_unit_tilt(double nu, double x);

}  // namespace closed_form

}  // namespace besseline
