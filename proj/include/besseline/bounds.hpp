#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "besseline/eval_result.hpp"
#include "besseline/quadrature.hpp"

namespace besseline::bounds {

// Every closed-form bound / inequality predicate the library can evaluate.
// BK* bound the integral over [x, inf) of e^{gamma t} K_{nu+n}(t)/t^nu dt
// (gamma = 0 for BK1/BK2/BK3), BI* bound the integral over (0, x] of
// e^{-gamma t} I_{nu+n}(t)/t^nu dt, DOB22_* sandwich the hypergeometric
// F_nu(x) = x^nu/(2^{nu-1} Gamma(nu)) 1F2(1/2; 3/2, nu; x^2/4), and the
// remaining ids are standalone ratio/positivity predicates.
enum class InequalityId {
    BK1,            // lower:  K_{nu+n-2}(x)/x^nu
    BK3,            // upper:  K_{nu+n-1}(x)/x^nu
    BK2,            // upper:  two-term K combination, see bound_value
    BK4,            // upper:  e^{gx}/(1-g) * integral_k(gamma=0)
    BK6,            // upper:  e^{gx}/(1-g) * K_{nu+n-1}(x)/x^nu
    BK5,            // upper:  e^{gx}/(1-g) * BK2 combination
    BK_GammaLower,  // lower:  e^{gx} K_{nu+n-2}(x)/x^nu, any gamma > 0
    BI1,            // lower:  I_nu(x)/x^nu - 1/(2^nu Gamma(nu+1)), n = 0
    BI2,            // lower:  I_{nu+n+1}(x)/x^nu
    BI3,            // upper:  two-term I combination, see bound_value
    BI4,            // lower:  tilted variant of BI1 via integral_i, n = 0
    BI5,            // lower:  tilted variant of BI1, n = 0
    BI7,            // upper:  e^{-gx}/(1-C g) * integral_i(gamma=0)
    BI8,            // upper:  e^{-gx}/(1-C g) * BI3 combination
    DOB22_L,        // lower:  I_nu(x)  < F_nu(x)
    DOB22_U,        // upper:  F_nu(x)  < 2 nu I_nu(x) - (2 nu - 1) I_{nu+2}(x)
    LEM_A1,         // K-combination positivity, margin via lemma_margin
    LEM_A2,         // elementary rational inequality, margin via lemma_margin
    CONJ_BK100,     // lower:  K_{nu+n-alpha}(x)/x^nu (exploratory)
    SEGURA_RATIO,   // K-ratio lower bound, margin via lemma_margin
    NASELL_RATIO,   // I-ratio lower bound, margin via lemma_margin
    RELERR_MAJORANT // upper:  majorant of the DOB22 relative errors
};

inline constexpr int kInequalityCount = 22;

// All ids in a fixed canonical order (the enum order above).
const InequalityId* all_ids() noexcept;

enum class BoundSide { lower, upper };

const char* to_string(InequalityId id) noexcept;
std::optional<InequalityId> from_string(std::string_view name) noexcept;

BoundSide side_of(InequalityId id) noexcept;

// Parameter sets attaining equality; empty string when the inequality is
// strict on its whole domain.
const char* equality_cases(InequalityId id) noexcept;

// Context for bound evaluation. cnun supplies C_{nu,n} for BI7/BI8; when
// absent the cap 2(nu+n+1) is used (valid, but it shrinks the admissible
// gamma range to gamma < 1/cap).
struct BoundOptions {
    std::optional<double> cnun;
    bool enforce_domain = true;
};

struct DomainCheck {
    bool ok = true;
    std::string failed_hypothesis;  // empty when ok
};

// The named upper cap on C_{nu,n}.
double cnun_cap(double nu, double n) noexcept;

// Validity-domain predicate for id at p. Never throws; reports the first
// failed hypothesis by name.
DomainCheck check_domain(InequalityId id, const Params& p,
                         const BoundOptions& opts = {});

// Value of the bound expression at p. Direction is side_of(id). For the
// ratio predicates the returned value is the comparison side (LEM_A1 -> 0,
// LEM_A2 / SEGURA_RATIO / NASELL_RATIO -> the rational bound on the ratio);
// for RELERR_MAJORANT it is the majorant itself. Throws DomainError naming
// the failed hypothesis unless opts.enforce_domain is false.
EvalResult bound_value(InequalityId id, const Params& p,
                       const BoundOptions& opts = {});

struct AlphaPair {
    double alpha = 0.0;        // nu+n - sqrt((nu+n)^2 - 2 nu - 1)
    double alpha_prime = 0.0;  // nu+n + sqrt((nu+n)^2 - 2 nu - 1)
};

// Candidate optimal order shift for CONJ_BK100. Requires n <= 1 and, for
// n < 1, nu >= 1-n+sqrt(2(1-n)) (the radicand is nonnegative there).
// Satisfies 1 <= alpha <= 1+sqrt(2(1-n)) and alpha < 2 for nu > 5/2-2n.
AlphaPair conjecture_alpha(double nu, double n);

// Signed margin LHS - RHS of the ratio/positivity predicates:
//   LEM_A1:       2(nu+n-2)K_{nu+n} - (2nu+n-2)K_{nu+n-1} + (2-n)K_{nu+n-3}
//   LEM_A2:       x/(nu+n-1/2+sqrt(x^2+(nu+n-1/2)^2))
//                   - (x-2(nu+n))/(x-(2-n))
//   SEGURA_RATIO: K_{nu+n-2}/K_{nu+n-1}
//                   - x/(nu+n-3/2+sqrt(x^2+(nu+n-3/2)^2))
//   NASELL_RATIO: I_{nu+1}/I_nu - x/(2(nu+1)+x)
// LEM_A1 is the plain K combination (assembled from exponentially scaled
// K values for range safety); the other three are scale-free ratios.
EvalResult lemma_margin(InequalityId id, const Params& p);

// (2nu-1)(4(nu+1)(nu+2)+(4nu+6)x) / ((2(nu+1)+x)(2(nu+2)+x)); nu > 1/2,
// x >= 0. Decays like 1/x for fixed nu and grows like nu for fixed x.
double relerr_majorant(double nu, double x);

// F_nu(x) = x^nu/(2^{nu-1} Gamma(nu)) 1F2(1/2; 3/2, nu; x^2/4) for nu > 1/2,
// and the exponentially scaled variant e^{-x} F_nu(x) for large x.
EvalResult corollary_f(double nu, double x);
EvalResult corollary_f_scaled(double nu, double x);

}  // namespace besseline::bounds
