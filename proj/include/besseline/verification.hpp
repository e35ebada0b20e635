#pragma once

#include <limits>
#include <string>
#include <vector>

#include "besseline/bounds.hpp"
#include "besseline/quadrature.hpp"

namespace besseline::verification {

// Cartesian sweep grid. xs must be strictly increasing and positive.
struct GridSpec {
    std::vector<double> nus;
    std::vector<double> ns;
    std::vector<double> gammas;
    std::vector<double> xs;
};

// count log-spaced points from lo to hi inclusive, endpoints exact.
std::vector<double> logspace(double lo, double hi, int count);

// Default sweep for id: nu in {-0.25, 0, 0.5, 1, 2.5, 5, 10}, n and gamma
// restricted to the values the inequality actually involves, x log-spaced
// over [1e-3, 50] with 40 points. Points outside the validity domain are
// filtered at sweep time.
GridSpec default_grid(bounds::InequalityId id);

struct Violation {
    Params params;
    double rel_margin = 0.0;
};

struct TightnessPoint {
    double nu = 0.0, n = 0.0, gamma = 0.0;
    double x = 0.0;
    double ratio = 0.0;  // bound / integral
};

// Two-point fit of the 1/x correction in ratio ~ 1 + c/x at the two largest
// grid abscissas of one parameter slice, compared against the coefficient
// predicted by the large-x expansions of the two sides.
struct TightnessFit {
    double nu = 0.0, n = 0.0, gamma = 0.0;
    double fitted_c = 0.0;
    double predicted_c = 0.0;
    bool flagged = false;  // |fitted - predicted| > 0.2 max(|predicted|, 0.5)
};

struct VerificationReport {
    bounds::InequalityId inequality{};
    long points_checked = 0;
    std::vector<Violation> violations;
    double min_margin = std::numeric_limits<double>::infinity();
    std::vector<TightnessPoint> tightness;  // extreme admissible x per slice
    std::vector<TightnessFit> fits;
    std::vector<std::string> notes;
    long flagged_points = 0;  // evaluation failures, listed in notes

    bool passed() const noexcept {
        return violations.empty() && flagged_points == 0;
    }
};

// The integral quantity a closed-form bound of id is compared against,
// evaluated by adaptive quadrature at p. Tilt-free bounds compare against
// the untilted integral regardless of p.gamma. Throws DomainError for ids
// that are ratio or positivity predicates rather than integral bounds.
EvalResult comparison_integral(bounds::InequalityId id, const Params& p);

// Sweeps grid intersected with the validity domain of id, comparing the
// quadrature value of the integral against the closed-form bound at every
// admissible point. The signed relative margin is nonnegative exactly when
// the inequality holds; a point is recorded as a violation only when the
// margin is below -(tol + pointwise error allowance), so numerical noise is
// never reported as a counterexample. For BI7/BI8 the constant C_{nu,n} is
// computed per (nu, n) slice via compute_cnun and padded by +2e-3 (a larger
// C keeps the bound valid while guarding against supremum underestimation).
// Evaluation failures are counted and noted, never silently dropped.
VerificationReport verify_inequality(bounds::InequalityId id, const GridSpec& grid,
                                     double tol = 1e-9);

struct CnunResult {
    double nu = 0.0, n = 0.0;
    double c_value = 0.0;
    double argmax_x = 0.0;
    double upper_cap = 0.0;  // 2(nu+n+1)
    bool bracketed = true;
    std::string warning;  // non-empty when only the scan-grid maximum is known
};

// sup over x > 0 of (x^nu / I_{nu+n}(x)) * integral over (0,x] of
// I_{nu+n}(t)/t^nu dt, located by a 400-point log scan of [1e-3, 200]
// followed by golden-section refinement to relative 1e-8 in x.
// Requires n > -1 and nu > -(n+1)/2.
CnunResult compute_cnun(double nu, double n);

struct TableEntry {
    double nu = 0.0;
    double x = 0.0;
    double relerr_l = 0.0;  // 1 - L/F
    double relerr_u = 0.0;  // U/F - 1
};

// Relative error of the sandwich L < F < U (see bounds::corollary_f) at the
// requested nodes, computed from exponentially scaled quantities so large x
// cannot overflow. Requires nu > 1/2 throughout.
std::vector<TableEntry> reproduce_tables(const std::vector<double>& nus,
                                         const std::vector<double>& xs);

struct ConjecturePoint {
    double x = 0.0;
    double integral_margin = 0.0;    // (integral - candidate bound) / integral
    double derivative_margin = 0.0;  // normalized derivative comparison margin
};

struct ProbePoint {
    double x = 0.0;
    double integral_margin = 0.0;
};

struct ConjectureReport {
    double nu = 0.0, n = 0.0;
    double alpha = 0.0, alpha_prime = 0.0;
    double beta_probe = 0.0;  // alpha - probe_offset
    std::vector<ConjecturePoint> points;
    std::vector<ProbePoint> probe;
    bool probe_found_negative = false;
    double probe_first_negative_x = 0.0;  // meaningful when found
    std::vector<std::string> notes;       // always labeled EXPLORATORY
    long flagged_points = 0;
};

// Exploratory margins for the candidate optimal-order lower bound: the
// integral margin and the derivative-comparison margin at beta = alpha over
// grid_x (default logspace(0.1, 50, 20)), plus an optimality probe at
// beta = alpha - probe_offset over logspace(0.1, 600, probe_points) that
// searches for a sign change. Violations are reported, never asserted as
// failures of anything beyond the probe's candidate.
ConjectureReport explore_conjecture(double nu, double n,
                                    std::vector<double> grid_x = {},
                                    double probe_offset = 0.1,
                                    int probe_points = 160);

// Worker cap for grid sweeps: BESSELINE_THREADS when set to a positive
// integer, else the hardware concurrency (at least 1). Sweep results are
// deterministic regardless of the thread count.
int max_threads() noexcept;

}  // namespace besseline::verification
