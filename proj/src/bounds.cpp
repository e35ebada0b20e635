#include "besseline/bounds.hpp"

#include <array>
#include <cmath>

#include "besseline/special_functions.hpp"

namespace besseline::bounds {

namespace {

using Id = InequalityId;

constexpr std::array<Id, kInequalityCount> kAllIds = {
    Id::BK1,     Id::BK3,     Id::BK2,        Id::BK4,          Id::BK6,
    Id::BK5,     Id::BK_GammaLower,           Id::BI1,          Id::BI2,
    Id::BI3,     Id::BI4,     Id::BI5,        Id::BI7,          Id::BI8,
    Id::DOB22_L, Id::DOB22_U, Id::LEM_A1,     Id::LEM_A2,       Id::CONJ_BK100,
    Id::SEGURA_RATIO,         Id::NASELL_RATIO,                 Id::RELERR_MAJORANT};

constexpr std::array<const char*, kInequalityCount> kNames = {
    "BK1",     "BK3",     "BK2",        "BK4",          "BK6",
    "BK5",     "BK_GammaLower",         "BI1",          "BI2",
    "BI3",     "BI4",     "BI5",        "BI7",          "BI8",
    "DOB22_L", "DOB22_U", "LEM_A1",     "LEM_A2",       "CONJ_BK100",
    "SEGURA_RATIO",       "NASELL_RATIO",               "RELERR_MAJORANT"};

// K_order(x)/x^nu * e^{extra_log}, with the exponentials combined into a
// single exp() so intermediate factors stay inside double range.
EvalResult k_term(double order, double nu, double x, double extra_log = 0.0) {
    EvalResult kt = besselk_scaled(order, x);
    double f = std::exp(-x - nu * std::log(x) + extra_log);
    double value = kt.value * f;
    return {value, kt.abs_error_bound * f + std::abs(value) * 1e-15};
}

// I_order(x)/x^nu * e^{extra_log}.
EvalResult i_term(double order, double nu, double x, double extra_log = 0.0) {
    EvalResult it = besseli_scaled(order, x);
    double f = std::exp(x - nu * std::log(x) + extra_log);
    double value = it.value * f;
    return {value, it.abs_error_bound * f + std::abs(value) * 1e-15};
}

// 1 / (2^nu Gamma(nu+1))
double power_constant(double nu) {
    return std::exp(-nu * std::log(2.0)) * rgamma(nu + 1.0);
}

DomainCheck fail(std::string hypothesis) { return {false, std::move(hypothesis)}; }

EvalResult combine2(double wa, const EvalResult& a, double wb, const EvalResult& b,
                    double scale = 1.0) {
    double value = (wa * a.value + wb * b.value) * scale;
    double err = (std::abs(wa) * a.abs_error_bound + std::abs(wb) * b.abs_error_bound +
                  (std::abs(wa * a.value) + std::abs(wb * b.value)) * 1e-15) *
                 scale;
    return {value, err};
}

}  // namespace

const InequalityId* all_ids() noexcept { return kAllIds.data(); }

const char* to_string(InequalityId id) noexcept {
    return kNames[static_cast<int>(id)];
}

std::optional<InequalityId> from_string(std::string_view name) noexcept {
    for (int i = 0; i < kInequalityCount; ++i) {
        if (name == kNames[i]) return static_cast<InequalityId>(i);
    }
    return std::nullopt;
}

BoundSide side_of(InequalityId id) noexcept {
    switch (id) {
        case Id::BK3:
        case Id::BK2:
        case Id::BK4:
        case Id::BK6:
        case Id::BK5:
        case Id::BI3:
        case Id::BI7:
        case Id::BI8:
        case Id::DOB22_U:
        case Id::RELERR_MAJORANT:
            return BoundSide::upper;
        default:
            return BoundSide::lower;
    }
}

const char* equality_cases(InequalityId id) noexcept {
    switch (id) {
        case Id::BK3:
            return "n = 1";
        case Id::BK4:
        case Id::BK6:
            return "n = 1 and nu = -1/2";
        case Id::BI2:
        case Id::BI3:
            return "nu = -(n+1)/2";
        case Id::CONJ_BK100:
            return "n = 1 (any nu)";
        default:
            return "";
    }
}

double cnun_cap(double nu, double n) noexcept { return 2.0 * (nu + n + 1.0); }

DomainCheck check_domain(InequalityId id, const Params& p, const BoundOptions& opts) {
    if (!(std::isfinite(p.nu) && std::isfinite(p.n) && std::isfinite(p.gamma) &&
          std::isfinite(p.x))) {
        return fail("finite parameters");
    }
    if (!(p.x > 0.0)) return fail("x > 0");
    const double nu = p.nu, n = p.n, g = p.gamma;
    switch (id) {
        case Id::BK1:
            if (!(n < 1.0)) return fail("n < 1");
            if (!(nu > 2.5 - 2.0 * n)) return fail("nu > 5/2 - 2n");
            break;
        case Id::BK3:
            if (!(n <= 1.0)) return fail("n <= 1 (reversed for n > 1)");
            break;
        case Id::BK2:
            if (!(n <= 1.0)) return fail("n <= 1");
            if (!(nu > 0.5 * (1.0 - n))) return fail("nu > (1-n)/2");
            if (std::abs(2.0 * nu + n - 1.0) < 1e-12) {
                return fail("2nu+n-1 bounded away from 0");
            }
            break;
        case Id::BK4:
        case Id::BK6:
            if (!(n <= 1.0)) return fail("n <= 1 (reversed for n > 1, nu <= 1/2-n)");
            if (!(nu >= 0.5 - n)) return fail("nu >= 1/2 - n");
            if (!(g > 0.0 && g < 1.0)) return fail("0 < gamma < 1");
            break;
        case Id::BK5:
            if (!(n <= 1.0)) return fail("n <= 1");
            if (!(nu > 0.5 * (1.0 - n))) return fail("nu > (1-n)/2");
            if (!(nu >= 0.5 - n)) return fail("nu >= 1/2 - n");
            if (!(g > 0.0 && g < 1.0)) return fail("0 < gamma < 1");
            if (std::abs(2.0 * nu + n - 1.0) < 1e-12) {
                return fail("2nu+n-1 bounded away from 0");
            }
            break;
        case Id::BK_GammaLower:
            if (!(n < 1.0)) return fail("n < 1");
            if (!(nu > 2.5 - 2.0 * n)) return fail("nu > 5/2 - 2n");
            if (!(g > 0.0)) return fail("gamma > 0");
            break;
        case Id::BI1:
            if (n != 0.0) return fail("n = 0 for this bound");
            if (!(nu > -1.0)) return fail("nu > -1");
            break;
        case Id::BI2:
        case Id::BI3:
            if (!(n > -1.0)) return fail("n > -1");
            if (!(nu >= -0.5 * (n + 1.0))) {
                return fail("nu >= -(n+1)/2 (equality at nu = -(n+1)/2)");
            }
            break;
        case Id::BI4:
        case Id::BI5:
            if (n != 0.0) return fail("n = 0 for this bound");
            if (!(nu > -1.0)) return fail("nu > -1");
            if (!(g > 0.0 && g < 1.0)) return fail("0 < gamma < 1");
            break;
        case Id::BI7:
        case Id::BI8: {
            if (!(n > -1.0)) return fail("n > -1");
            if (!(nu > -0.5 * (n + 1.0))) return fail("nu > -(n+1)/2");
            double c = opts.cnun.value_or(cnun_cap(nu, n));
            if (!(c > 0.0) || !std::isfinite(c)) return fail("C_{nu,n} finite and > 0");
            if (!(g > 0.0 && g < 1.0 / c)) return fail("0 < gamma < 1/C_{nu,n}");
            break;
        }
        case Id::DOB22_L:
        case Id::DOB22_U:
        case Id::RELERR_MAJORANT:
            if (!(nu > 0.5)) return fail("nu > 1/2");
            break;
        case Id::LEM_A1:
            if (!(n < 1.0)) return fail("n < 1");
            if (!(nu > 2.5 - 2.0 * n)) return fail("nu > 5/2 - 2n");
            break;
        case Id::LEM_A2:
            if (!(n < 1.0)) return fail("n < 1");
            if (!(nu > 1.0 - 1.5 * n)) return fail("nu > 1 - 3n/2");
            // Boundary x = 2(nu+n) included: the rational side vanishes there
            // while the ratio side stays positive, so the margin is still
            // well defined (nu > 1-3n/2 keeps the denominator positive).
            if (!(p.x >= 2.0 * (nu + n))) return fail("x >= 2(nu+n)");
            break;
        case Id::CONJ_BK100:
            if (!(n <= 1.0)) return fail("n <= 1");
            if (n != 1.0 && !(nu >= 1.0 - n + std::sqrt(2.0 * (1.0 - n)))) {
                return fail("nu >= 1-n+sqrt(2(1-n))");
            }
            break;
        case Id::SEGURA_RATIO:
            if (!(nu > 1.5 - n)) return fail("nu > 3/2 - n");
            break;
        case Id::NASELL_RATIO:
            if (!(nu > -1.0)) return fail("nu > -1");
            break;
    }
    return {};
}

EvalResult bound_value(InequalityId id, const Params& p, const BoundOptions& opts) {
    if (opts.enforce_domain) {
        DomainCheck dc = check_domain(id, p, opts);
        if (!dc.ok) {
            throw DomainError(std::string("bound_value(") + to_string(id) +
                              "): requires " + dc.failed_hypothesis);
        }
    }
    const double nu = p.nu, n = p.n, g = p.gamma, x = p.x;
    EvalResult r{};
    switch (id) {
        case Id::BK1:
            r = k_term(nu + n - 2.0, nu, x);
            break;
        case Id::BK3:
            r = k_term(nu + n - 1.0, nu, x);
            break;
        case Id::BK2: {
            double d = 2.0 * nu + n - 1.0;
            r = combine2(2.0 * (nu + n - 1.0) / d, k_term(nu + n - 1.0, nu, x),
                         -(n - 1.0) / d, k_term(nu + n - 3.0, nu, x));
            break;
        }
        case Id::BK4: {
            EvalResult base = integral_k({nu, n, 0.0, x});
            double f = std::exp(g * x) / (1.0 - g);
            r = {base.value * f,
                 base.abs_error_bound * f + std::abs(base.value) * f * 1e-15};
            break;
        }
        case Id::BK6: {
            EvalResult a = k_term(nu + n - 1.0, nu, x, g * x);
            r = {a.value / (1.0 - g), a.abs_error_bound / (1.0 - g)};
            break;
        }
        case Id::BK5: {
            double d = 2.0 * nu + n - 1.0;
            r = combine2(2.0 * (nu + n - 1.0) / d, k_term(nu + n - 1.0, nu, x, g * x),
                         -(n - 1.0) / d, k_term(nu + n - 3.0, nu, x, g * x),
                         1.0 / (1.0 - g));
            break;
        }
        case Id::BK_GammaLower:
            r = k_term(nu + n - 2.0, nu, x, g * x);
            break;
        case Id::BI1: {
            EvalResult a = i_term(nu, nu, x);
            double c = power_constant(nu);
            r = {a.value - c,
                 a.abs_error_bound + std::abs(c) * 1e-15 + std::abs(a.value) * 1e-16};
            break;
        }
        case Id::BI2:
            r = i_term(nu + n + 1.0, nu, x);
            break;
        case Id::BI3:
            r = combine2(2.0 * (nu + n + 1.0) / (n + 1.0), i_term(nu + n + 1.0, nu, x),
                         -(2.0 * nu + n + 1.0) / (n + 1.0), i_term(nu + n + 3.0, nu, x));
            break;
        case Id::BI4: {
            EvalResult base = integral_i({nu, 0.0, 0.0, x});
            double c = power_constant(nu);
            double eg = std::exp(-g * x);
            double rise = -std::expm1(-g * x);  // 1 - e^{-gamma x}, cancellation-free
            double inv = 1.0 / (1.0 - g);
            double v = inv * (eg * base.value - c * rise);
            r = {v, inv * (eg * base.abs_error_bound +
                           (std::abs(eg * base.value) + std::abs(c * rise)) * 1e-15)};
            break;
        }
        case Id::BI5: {
            EvalResult a = i_term(nu, nu, x, -g * x);
            double c = power_constant(nu);
            double inv = 1.0 / (1.0 - g);
            r = {inv * (a.value - c),
                 inv * (a.abs_error_bound + (std::abs(a.value) + std::abs(c)) * 1e-15)};
            break;
        }
        case Id::BI7: {
            double cn = opts.cnun.value_or(cnun_cap(nu, n));
            EvalResult base = integral_i({nu, n, 0.0, x});
            double f = std::exp(-g * x) / (1.0 - cn * g);
            r = {base.value * f,
                 base.abs_error_bound * f + std::abs(base.value) * f * 1e-15};
            break;
        }
        case Id::BI8: {
            double cn = opts.cnun.value_or(cnun_cap(nu, n));
            r = combine2(2.0 * (nu + n + 1.0) / (n + 1.0),
                         i_term(nu + n + 1.0, nu, x, -g * x),
                         -(2.0 * nu + n + 1.0) / (n + 1.0),
                         i_term(nu + n + 3.0, nu, x, -g * x), 1.0 / (1.0 - cn * g));
            break;
        }
        case Id::DOB22_L:
            r = besseli(nu, x);
            break;
        case Id::DOB22_U: {
            double ex = std::exp(x);
            r = combine2(2.0 * nu, besseli_scaled(nu, x), -(2.0 * nu - 1.0),
                         besseli_scaled(nu + 2.0, x), ex);
            break;
        }
        case Id::CONJ_BK100: {
            AlphaPair ap = conjecture_alpha(nu, n);
            r = k_term(nu + n - ap.alpha, nu, x);
            break;
        }
        case Id::LEM_A1:
            r = {0.0, 0.0};
            break;
        case Id::LEM_A2: {
            double v = (x - 2.0 * (nu + n)) / (x - (2.0 - n));
            r = {v, std::abs(v) * 1e-14};
            break;
        }
        case Id::SEGURA_RATIO: {
            double m = nu + n - 1.5;
            double v = x / (m + std::sqrt(x * x + m * m));
            r = {v, std::abs(v) * 1e-14};
            break;
        }
        case Id::NASELL_RATIO: {
            double v = x / (2.0 * (nu + 1.0) + x);
            r = {v, std::abs(v) * 1e-14};
            break;
        }
        case Id::RELERR_MAJORANT: {
            double v = relerr_majorant(nu, x);
            r = {v, std::abs(v) * 1e-14};
            break;
        }
    }
    if (!std::isfinite(r.value)) {
        throw OverflowSignal(std::string("bound_value(") + to_string(id) +
                             "): result exceeds double range");
    }
    return r;
}

AlphaPair conjecture_alpha(double nu, double n) {
    if (!(n <= 1.0)) throw DomainError("conjecture_alpha: requires n <= 1");
    if (n != 1.0 && !(nu >= 1.0 - n + std::sqrt(2.0 * (1.0 - n)))) {
        throw DomainError("conjecture_alpha: requires nu >= 1-n+sqrt(2(1-n))");
    }
    double s = nu + n;
    double rad = s * s - 2.0 * nu - 1.0;
    if (rad < 0.0) rad = 0.0;  // round-off exactly at the domain boundary
    double q = std::sqrt(rad);
    return {s - q, s + q};
}

EvalResult lemma_margin(InequalityId id, const Params& p) {
    DomainCheck dc = check_domain(id, p, {});
    if (!dc.ok) {
        throw DomainError(std::string("lemma_margin(") + to_string(id) +
                          "): requires " + dc.failed_hypothesis);
    }
    const double nu = p.nu, n = p.n, x = p.x;
    switch (id) {
        case Id::LEM_A1: {
            double c1 = 2.0 * (nu + n - 2.0);
            double c2 = -(2.0 * nu + n - 2.0);
            double c3 = 2.0 - n;
            EvalResult a = besselk_scaled(nu + n, x);
            EvalResult b = besselk_scaled(nu + n - 1.0, x);
            EvalResult c = besselk_scaled(nu + n - 3.0, x);
            double ex = std::exp(-x);
            double v = (c1 * a.value + c2 * b.value + c3 * c.value) * ex;
            double err = (std::abs(c1) * a.abs_error_bound +
                          std::abs(c2) * b.abs_error_bound +
                          std::abs(c3) * c.abs_error_bound +
                          (std::abs(c1 * a.value) + std::abs(c2 * b.value) +
                           std::abs(c3 * c.value)) *
                              3e-16) *
                         ex;
            return {v, err};
        }
        case Id::LEM_A2: {
            double m = nu + n - 0.5;
            double lhs = x / (m + std::sqrt(x * x + m * m));
            double rhs = (x - 2.0 * (nu + n)) / (x - (2.0 - n));
            return {lhs - rhs, (std::abs(lhs) + std::abs(rhs)) * 1e-14};
        }
        case Id::SEGURA_RATIO: {
            EvalResult a = besselk_scaled(nu + n - 2.0, x);
            EvalResult b = besselk_scaled(nu + n - 1.0, x);
            double ratio = a.value / b.value;
            double m = nu + n - 1.5;
            double rhs = x / (m + std::sqrt(x * x + m * m));
            double err = std::abs(ratio) * (a.abs_error_bound / std::abs(a.value) +
                                            b.abs_error_bound / std::abs(b.value)) +
                         (std::abs(ratio) + std::abs(rhs)) * 1e-15;
            return {ratio - rhs, err};
        }
        case Id::NASELL_RATIO: {
            EvalResult a = besseli_scaled(nu + 1.0, x);
            EvalResult b = besseli_scaled(nu, x);
            double ratio = a.value / b.value;
            double rhs = x / (2.0 * (nu + 1.0) + x);
            double err = std::abs(ratio) * (a.abs_error_bound / std::abs(a.value) +
                                            b.abs_error_bound / std::abs(b.value)) +
                         (std::abs(ratio) + std::abs(rhs)) * 1e-15;
            return {ratio - rhs, err};
        }
        default:
            throw DomainError(std::string("lemma_margin: ") + to_string(id) +
                              " is not a ratio/positivity predicate");
    }
}

double relerr_majorant(double nu, double x) {
    if (!(nu > 0.5)) throw DomainError("relerr_majorant: requires nu > 1/2");
    if (!(x >= 0.0)) throw DomainError("relerr_majorant: requires x >= 0");
    return (2.0 * nu - 1.0) * (4.0 * (nu + 1.0) * (nu + 2.0) + (4.0 * nu + 6.0) * x) /
           ((2.0 * (nu + 1.0) + x) * (2.0 * (nu + 2.0) + x));
}

EvalResult corollary_f(double nu, double x) {
    if (!(nu > 0.5)) throw DomainError("corollary_f: requires nu > 1/2");
    if (!(x > 0.0)) throw DomainError("corollary_f: requires x > 0");
    double lp = nu * std::log(x) - (nu - 1.0) * std::log(2.0) - std::lgamma(nu);
    return hyp1f2_log_scaled({0.5, 1.5, nu, 0.25 * x * x}, lp);
}

EvalResult corollary_f_scaled(double nu, double x) {
    if (!(nu > 0.5)) throw DomainError("corollary_f_scaled: requires nu > 1/2");
    if (!(x > 0.0)) throw DomainError("corollary_f_scaled: requires x > 0");
    double lp = nu * std::log(x) - (nu - 1.0) * std::log(2.0) - std::lgamma(nu) - x;
    return hyp1f2_log_scaled({0.5, 1.5, nu, 0.25 * x * x}, lp);
}

}  // namespace besseline::bounds
