#pragma once

// Slow reference implementations used only by the test suites. Everything
// here is built in long double from defining series and integral
// representations plus composite Simpson rules, so none of it shares code
// paths (or failure modes) with the library under test.

#include <cmath>

namespace oracles {

using ld = long double;

inline constexpr ld kPi = 3.14159265358979323846264338327950288L;

// Composite Simpson over [a, b] with an even panel count.
template <typename F>
ld simpson(F&& f, ld a, ld b, int panels) {
    const ld h = (b - a) / panels;
    ld s = f(a) + f(b);
    for (int i = 1; i < panels; i += 2) s += 4.0L * f(a + h * i);
    for (int i = 2; i < panels; i += 2) s += 2.0L * f(a + h * i);
    return s * h / 3.0L;
}

// One Richardson step on top of Simpson: cancels the h^4 error term.
template <typename F>
ld simpson_rich(F&& f, ld a, ld b, int panels) {
    const ld s1 = simpson(f, a, b, panels);
    const ld s2 = simpson(f, a, b, 2 * panels);
    return (16.0L * s2 - s1) / 15.0L;
}

inline ld gamma_ld(ld u) { return std::tgamma(u); }

// I_nu(x) by its power series. Valid for x > 0 and any real nu that is not
// a negative integer; near the reciprocal-gamma poles the suppressed leading
// terms come out tiny automatically, which matches the limit function.
inline ld besseli_series(ld nu, ld x, bool scaled = false) {
    const ld half = 0.5L * x;
    ld term = std::pow(half, nu) / std::tgamma(nu + 1.0L);
    ld sum = term;
    ld sum_abs = std::fabs(term);
    const ld q = half * half;
    for (int k = 1; k < 8000; ++k) {
        term *= q / (static_cast<ld>(k) * (nu + static_cast<ld>(k)));
        sum += term;
        sum_abs += std::fabs(term);
        if (std::fabs(term) < 1e-22L * sum_abs && k > 8) break;
    }
    return scaled ? sum * std::exp(-x) : sum;
}

// K_nu(x) by the integral over t >= 0 of exp(-x cosh t) cosh(nu t) dt.
// The truncation point keeps the dropped tail below e^-80 of the peak.
inline ld besselk_cosh_integral(ld nu, ld x, bool scaled = false,
                                int panels = 3000) {
    nu = std::fabs(nu);
    const ld shift = scaled ? x : 0.0L;
    auto neg_log = [&](ld t) { return x * std::cosh(t) - nu * t; };
    const ld tpeak = std::asinh(nu / x);
    const ld floor_log = neg_log(tpeak) + 80.0L;
    ld upper = tpeak + 2.0L;
    while (neg_log(upper) < floor_log) upper += 1.0L;
    auto f = [&](ld t) {
        const ld e = shift - x * std::cosh(t);
        return 0.5L * (std::exp(e + nu * t) + std::exp(e - nu * t));
    };
    return simpson_rich(f, 0.0L, upper, panels);
}

// 1F2(a1; b1, b2; z) by direct summation.
inline ld hyp1f2_series(ld a1, ld b1, ld b2, ld z) {
    ld term = 1.0L, sum = 1.0L, sum_abs = 1.0L;
    for (int k = 0; k < 100000; ++k) {
        const ld kk = static_cast<ld>(k);
        term *= (a1 + kk) * z / ((b1 + kk) * (b2 + kk) * (kk + 1.0L));
        sum += term;
        sum_abs += std::fabs(term);
        if (std::fabs(term) < 1e-22L * sum_abs && k > 4) break;
    }
    return sum;
}

// x^nu / (2^{nu-1} Gamma(nu)) * 1F2(1/2; 3/2, nu; x^2/4), nu > 1/2.
inline ld corollary_f_series(ld nu, ld x, bool scaled = false) {
    const ld pref =
        std::pow(x, nu) / (std::pow(2.0L, nu - 1.0L) * std::tgamma(nu));
    const ld v = pref * hyp1f2_series(0.5L, 1.5L, nu, 0.25L * x * x);
    return scaled ? v * std::exp(-x) : v;
}

// Brute-force integral over (0, x] of e^{-gamma t} I_{nu+n}(t) / t^nu dt.
// Head (0, delta]: the integrand is sum over m, j of
//   c_m (-gamma)^j / j! * t^{n+2m+j},  c_m = 2^{-(nu+n+2m)} / (m! Gamma(nu+n+m+1)),
// integrated term by term, which absorbs the algebraic endpoint factor
// exactly. Body [delta, x]: Simpson + Richardson on the smooth remainder;
// delta = min(x, 1)/10 keeps the body derivatives moderate while the double
// series still converges like (delta^2/4)^m.
inline ld integral_i_brute(ld nu, ld n, ld gamma, ld x) {
    const ld mu = nu + n;
    const ld delta = 0.1L * std::fmin(x, 1.0L);
    ld head = 0.0L;
    ld cm = std::pow(0.5L, mu) / std::tgamma(mu + 1.0L);
    for (int m = 0; m < 14; ++m) {
        if (m > 0) cm *= 0.25L / (static_cast<ld>(m) * (mu + static_cast<ld>(m)));
        ld gj = 1.0L;
        for (int j = 0; j < 20; ++j) {
            if (j > 0) gj *= -gamma / static_cast<ld>(j);
            const ld p = n + 2.0L * m + j + 1.0L;
            head += cm * gj * std::pow(delta, p) / p;
        }
    }
    if (delta >= x) return head;  // cannot happen with delta = x/10, kept for safety
    auto f = [&](ld t) {
        return std::exp(-gamma * t) * besseli_series(mu, t) * std::pow(t, -nu);
    };
    return head + simpson_rich(f, delta, x, 4000);
}

// Brute-force integral over [x, infinity) of e^{gamma t} K_{nu+n}(t) / t^nu dt
// for gamma < 1. Geometric panels resolve the algebraically varying region
// near x, linear panels of width 5/(1-gamma) walk the exponential tail, and
// integration stops once the dropped tail is below e^-55 of the running
// total's scale.
inline ld integral_k_brute(ld nu, ld n, ld gamma, ld x) {
    const ld mu = nu + n;
    const ld rate = 1.0L - gamma;
    auto f = [&](ld t) {
        return std::exp(gamma * t) * besselk_cosh_integral(mu, t, false, 400) *
               std::pow(t, -nu);
    };
    ld total = 0.0L;
    ld a = x;
    while (a < 8.0L) {
        const ld b = std::fmin(2.0L * a, 8.0L);
        total += simpson_rich(f, a, b, 160);
        a = b;
    }
    const ld stop = a + 55.0L / rate;
    const ld width = 5.0L / rate;
    while (a < stop) {
        total += simpson_rich(f, a, a + width, 160);
        a += width;
    }
    return total;
}

}  // namespace oracles
