#include "besseline/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <utility>

#include "besseline/special_functions.hpp"

namespace besseline::verification {

namespace {

using bounds::BoundSide;
using Id = bounds::InequalityId;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
void parallel_for(std::size_t count, F&& fn) {
    std::size_t nt = std::min<std::size_t>(
        static_cast<std::size_t>(max_threads()), count);
    if (nt <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count) break;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

bool uses_gamma(Id id) {
    switch (id) {
        case Id::BK4:
        case Id::BK6:
        case Id::BK5:
        case Id::BK_GammaLower:
        case Id::BI4:
        case Id::BI5:
        case Id::BI7:
        case Id::BI8:
            return true;
        default:
            return false;
    }
}

bool k_family(Id id) {
    switch (id) {
        case Id::BK1:
        case Id::BK3:
        case Id::BK2:
        case Id::BK4:
        case Id::BK6:
        case Id::BK5:
        case Id::BK_GammaLower:
        case Id::LEM_A1:
        case Id::LEM_A2:
        case Id::SEGURA_RATIO:
        case Id::CONJ_BK100:
            return true;
        default:
            return false;
    }
}

bool fixed_n_zero(Id id) {
    switch (id) {
        case Id::BI1:
        case Id::BI4:
        case Id::BI5:
        case Id::DOB22_L:
        case Id::DOB22_U:
        case Id::NASELL_RATIO:
        case Id::RELERR_MAJORANT:
            return true;
        default:
            return false;
    }
}

// Normalization scale for the LEM_A1 combination margin.
double lem_a1_scale(const Params& p) {
    double c1 = 2.0 * (p.nu + p.n - 2.0);
    double c2 = -(2.0 * p.nu + p.n - 2.0);
    double c3 = 2.0 - p.n;
    double s = std::abs(c1) * besselk_scaled(p.nu + p.n, p.x).value +
               std::abs(c2) * besselk_scaled(p.nu + p.n - 1.0, p.x).value +
               std::abs(c3) * besselk_scaled(p.nu + p.n - 3.0, p.x).value;
    return s * std::exp(-p.x);
}

// Second asymptotic coefficient (4 ord^2 - 1)/8 shared by the large-x
// expansions of both Bessel kinds.
double sterm(double ord) { return (4.0 * ord * ord - 1.0) / 8.0; }

// Predicted 1/x coefficient of ratio bound/integral as x -> infinity.
// NaN when no prediction applies (non-tight or ratio-predicate ids).
double predicted_delta_c(Id id, double nu, double n, double g) {
    double mu = nu + n;
    switch (id) {
        case Id::BK1:
            return sterm(mu - 2.0) - sterm(mu) + (nu + 0.5);
        case Id::BK3:
            return 1.0 - n;
        case Id::BK2: {
            double d = 2.0 * nu + n - 1.0;
            double wa = 2.0 * (nu + n - 1.0) / d;
            double wb = -(n - 1.0) / d;
            return wa * sterm(mu - 1.0) + wb * sterm(mu - 3.0) - sterm(mu) +
                   (nu + 0.5);
        }
        case Id::BK4:
            return (nu + 0.5) * g / (1.0 - g);
        case Id::BK6:
            return -mu + 0.5 + (nu + 0.5) / (1.0 - g);
        case Id::BK5: {
            double d = 2.0 * nu + n - 1.0;
            double wa = 2.0 * (nu + n - 1.0) / d;
            double wb = -(n - 1.0) / d;
            return wa * sterm(mu - 1.0) + wb * sterm(mu - 3.0) - sterm(mu) +
                   (nu + 0.5) / (1.0 - g);
        }
        case Id::BI1:
            return -(nu + 0.5);
        case Id::BI2:
            return -(2.0 * nu + n + 1.0);
        case Id::BI3: {
            double ua = 2.0 * (nu + n + 1.0) / (n + 1.0);
            double ub = -(2.0 * nu + n + 1.0) / (n + 1.0);
            return -ua * sterm(mu + 1.0) - ub * sterm(mu + 3.0) + sterm(mu) -
                   (nu + 0.5);
        }
        case Id::BI4:
            return -(nu + 0.5) * g / (1.0 - g);
        case Id::BI5:
            return -(nu + 0.5) / (1.0 - g);
        case Id::DOB22_L:
            return 1.0 - 2.0 * nu;
        case Id::DOB22_U: {
            double ua = 2.0 * nu;
            double ub = -(2.0 * nu - 1.0);
            return -ua * sterm(nu) - ub * sterm(nu + 2.0) + sterm(nu - 1.0) -
                   (nu - 0.5);
        }
        default:
            return kNaN;
    }
}

struct PointResult {
    bool failed = false;
    std::string what;
    double rel_margin = 0.0;
    double allowance = 0.0;
    double ratio = kNaN;
};

PointResult eval_point(Id id, const Params& p, const bounds::BoundOptions& opts) {
    PointResult pr;
    try {
        switch (id) {
            case Id::LEM_A1: {
                EvalResult m = bounds::lemma_margin(id, p);
                double scale = lem_a1_scale(p);
                pr.rel_margin = m.value / scale;
                pr.allowance = m.abs_error_bound / scale;
                break;
            }
            case Id::LEM_A2:
            case Id::SEGURA_RATIO:
            case Id::NASELL_RATIO: {
                EvalResult m = bounds::lemma_margin(id, p);
                pr.rel_margin = m.value;
                pr.allowance = m.abs_error_bound;
                break;
            }
            case Id::RELERR_MAJORANT: {
                EvalResult f = bounds::corollary_f_scaled(p.nu, p.x);
                EvalResult l = besseli_scaled(p.nu, p.x);
                EvalResult u = besseli_scaled(p.nu + 2.0, p.x);
                double uval = 2.0 * p.nu * l.value - (2.0 * p.nu - 1.0) * u.value;
                double uerr = 2.0 * std::abs(p.nu) * l.abs_error_bound +
                              std::abs(2.0 * p.nu - 1.0) * u.abs_error_bound;
                double rl = 1.0 - l.value / f.value;
                double ru = uval / f.value - 1.0;
                double maj = bounds::relerr_majorant(p.nu, p.x);
                pr.rel_margin = maj - std::max(rl, ru);
                pr.allowance = (l.abs_error_bound + uerr +
                                2.0 * f.abs_error_bound) /
                                   f.value +
                               1e-12;
                break;
            }
            case Id::DOB22_L:
            case Id::DOB22_U: {
                EvalResult f = bounds::corollary_f_scaled(p.nu, p.x);
                EvalResult bnd;
                if (id == Id::DOB22_L) {
                    bnd = besseli_scaled(p.nu, p.x);
                } else {
                    EvalResult a = besseli_scaled(p.nu, p.x);
                    EvalResult b = besseli_scaled(p.nu + 2.0, p.x);
                    bnd = {2.0 * p.nu * a.value - (2.0 * p.nu - 1.0) * b.value,
                           2.0 * std::abs(p.nu) * a.abs_error_bound +
                               std::abs(2.0 * p.nu - 1.0) * b.abs_error_bound};
                }
                double sign = (id == Id::DOB22_U) ? 1.0 : -1.0;
                pr.rel_margin = sign * (bnd.value - f.value) / std::abs(f.value);
                pr.allowance =
                    (f.abs_error_bound + bnd.abs_error_bound) / std::abs(f.value);
                pr.ratio = bnd.value / f.value;
                break;
            }
            default: {
                EvalResult integ = comparison_integral(id, p);
                EvalResult bnd = bounds::bound_value(id, p, opts);
                double ai = std::abs(integ.value);
                double sign = (bounds::side_of(id) == BoundSide::upper) ? 1.0 : -1.0;
                pr.rel_margin = sign * (bnd.value - integ.value) / ai;
                pr.allowance = (integ.abs_error_bound + bnd.abs_error_bound) / ai;
                pr.ratio = bnd.value / integ.value;
                break;
            }
        }
    } catch (const std::exception& e) {
        pr.failed = true;
        pr.what = e.what();
    }
    return pr;
}

}  // namespace

EvalResult comparison_integral(bounds::InequalityId id, const Params& p) {
    switch (id) {
        case Id::BK1:
        case Id::BK3:
        case Id::BK2:
        case Id::CONJ_BK100:
            return integral_k({p.nu, p.n, 0.0, p.x});
        case Id::BK4:
        case Id::BK6:
        case Id::BK5:
        case Id::BK_GammaLower:
            return integral_k(p);
        case Id::BI1:
            return integral_i({p.nu, 0.0, 0.0, p.x});
        case Id::BI2:
        case Id::BI3:
            return integral_i({p.nu, p.n, 0.0, p.x});
        case Id::BI4:
        case Id::BI5:
            return integral_i({p.nu, 0.0, p.gamma, p.x});
        case Id::BI7:
        case Id::BI8:
            return integral_i(p);
        default:
            throw DomainError(
                "comparison_integral: id is a ratio or positivity predicate, "
                "not an integral bound");
    }
}

int max_threads() noexcept {
    if (const char* env = std::getenv("BESSELINE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<int>(std::min(v, 256L));
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

std::vector<double> logspace(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
        throw DomainError("logspace: requires 0 < lo < hi and count >= 2");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * i / (count - 1.0));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

GridSpec default_grid(bounds::InequalityId id) {
    GridSpec g;
    g.nus = {-0.25, 0.0, 0.5, 1.0, 2.5, 5.0, 10.0};
    if (fixed_n_zero(id)) {
        g.ns = {0.0};
    } else if (k_family(id)) {
        g.ns = {-1.0, 0.0, 0.5, 0.9};
    } else {
        g.ns = {-0.5, 0.0, 0.5, 0.9};
    }
    g.gammas = uses_gamma(id) ? std::vector<double>{0.25, 0.5, 0.9}
                              : std::vector<double>{0.0};
    g.xs = logspace(1e-3, 50.0, 40);
    return g;
}

VerificationReport verify_inequality(bounds::InequalityId id, const GridSpec& grid,
                                     double tol) {
    if (grid.nus.empty() || grid.ns.empty() || grid.gammas.empty() ||
        grid.xs.empty()) {
        throw DomainError("verify_inequality: grid lists must be nonempty");
    }
    for (std::size_t i = 1; i < grid.xs.size(); ++i) {
        if (!(grid.xs[i] > grid.xs[i - 1]) || !(grid.xs[0] > 0.0)) {
            throw DomainError(
                "verify_inequality: xs must be positive and strictly increasing");
        }
    }
    if (!(grid.xs[0] > 0.0)) {
        throw DomainError("verify_inequality: xs must be positive");
    }

    VerificationReport rep;
    rep.inequality = id;
    rep.notes.push_back(
        std::string("margin convention: signed relative margin is nonnegative "
                    "when the ") +
        (bounds::side_of(id) == BoundSide::upper ? "upper" : "lower") +
        " bound holds");
    if (id == Id::CONJ_BK100) {
        rep.notes.push_back(
            "EXPLORATORY: candidate bound; margins are evidence, not certification");
    }

    const bool needs_c = (id == Id::BI7 || id == Id::BI8);
    std::map<std::pair<double, double>, double> c_by_slice;
    if (needs_c) {
        for (double nu : grid.nus) {
            for (double n : grid.ns) {
                if (n > -1.0 && nu > -0.5 * (n + 1.0)) {
                    CnunResult c = compute_cnun(nu, n);
                    // Padding keeps the bound valid even if the solver sits
                    // slightly below the true supremum.
                    c_by_slice[{nu, n}] = c.c_value + 2e-3;
                }
            }
        }
        std::string note = "C constants computed per (nu, n) slice, +2e-3 pad:";
        for (const auto& [key, val] : c_by_slice) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), " C(%g,%g)=%.6g", key.first,
                          key.second, val);
            note += buf;
        }
        rep.notes.push_back(note);
    }

    struct Task {
        Params p;
        bounds::BoundOptions opts;
        std::size_t slice = 0;
    };
    std::vector<Task> tasks;
    std::size_t slice_idx = 0;
    struct SliceInfo {
        double nu, n, gamma;
    };
    std::vector<SliceInfo> slices;
    for (double nu : grid.nus) {
        for (double n : grid.ns) {
            for (double g : grid.gammas) {
                bool slice_used = false;
                bounds::BoundOptions opts;
                if (needs_c) {
                    auto it = c_by_slice.find({nu, n});
                    if (it == c_by_slice.end()) continue;
                    opts.cnun = it->second;
                }
                for (double x : grid.xs) {
                    Params p{nu, n, g, x};
                    if (!bounds::check_domain(id, p, opts).ok) continue;
                    tasks.push_back({p, opts, slice_idx});
                    slice_used = true;
                }
                if (slice_used) {
                    slices.push_back({nu, n, g});
                    ++slice_idx;
                }
            }
        }
    }
    rep.points_checked = static_cast<long>(tasks.size());

    std::vector<PointResult> results(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        results[i] = eval_point(id, tasks[i].p, tasks[i].opts);
    });

    constexpr std::size_t kMaxNotedFailures = 16;
    std::size_t noted_failures = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const PointResult& pr = results[i];
        const Params& p = tasks[i].p;
        if (pr.failed) {
            ++rep.flagged_points;
            if (noted_failures < kMaxNotedFailures) {
                char buf[160];
                std::snprintf(buf, sizeof(buf),
                              "evaluation failed at nu=%g n=%g gamma=%g x=%g: ",
                              p.nu, p.n, p.gamma, p.x);
                rep.notes.push_back(buf + pr.what);
                ++noted_failures;
            }
            continue;
        }
        rep.min_margin = std::min(rep.min_margin, pr.rel_margin);
        if (pr.rel_margin < -(tol + pr.allowance)) {
            rep.violations.push_back({p, pr.rel_margin});
        }
    }
    if (rep.flagged_points > static_cast<long>(kMaxNotedFailures)) {
        rep.notes.push_back("further evaluation failures omitted from notes");
    }

    // Tightness: extreme admissible abscissas of each slice, plus the 1/x fit
    // of the ratio against its predicted asymptotic coefficient.
    for (std::size_t s = 0; s < slices.size(); ++s) {
        std::vector<std::pair<double, double>> pts;  // (x, ratio)
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].slice != s || results[i].failed) continue;
            if (!std::isfinite(results[i].ratio)) continue;
            pts.emplace_back(tasks[i].p.x, results[i].ratio);
        }
        if (pts.empty()) continue;
        const SliceInfo& si = slices[s];
        rep.tightness.push_back(
            {si.nu, si.n, si.gamma, pts.front().first, pts.front().second});
        if (pts.size() > 1) {
            rep.tightness.push_back(
                {si.nu, si.n, si.gamma, pts.back().first, pts.back().second});
        }
        double pred = predicted_delta_c(id, si.nu, si.n, si.gamma);
        if (pts.size() >= 2 && std::isfinite(pred)) {
            auto [xa, ra] = pts[pts.size() - 2];
            auto [xb, rb] = pts[pts.size() - 1];
            double fitted = (ra - rb) / (1.0 / xa - 1.0 / xb);
            bool flagged =
                std::abs(fitted - pred) > 0.2 * std::max(std::abs(pred), 0.5);
            rep.fits.push_back({si.nu, si.n, si.gamma, fitted, pred, flagged});
        }
    }
    return rep;
}

CnunResult compute_cnun(double nu, double n) {
    if (!(n > -1.0)) throw DomainError("compute_cnun: requires n > -1");
    if (!(nu > -0.5 * (n + 1.0))) {
        throw DomainError("compute_cnun: requires nu > -(n+1)/2");
    }
    auto g = [nu, n](double x) {
        EvalResult integ = integral_i({nu, n, 0.0, x}, 1e-11);
        EvalResult bes = besseli_scaled(nu + n, x);
        double f = std::exp(nu * std::log(x) - x);
        return integ.value * f / bes.value;
    };

    const std::vector<double> xs = logspace(1e-3, 200.0, 400);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = g(xs[i]);
        if (v > best) {
            best = v;
            bi = i;
        }
    }
    CnunResult res{nu, n, best, xs[bi], bounds::cnun_cap(nu, n), true, ""};
    if (bi == 0 || bi + 1 == xs.size()) {
        res.bracketed = false;
        res.warning =
            "supremum not bracketed by the scan grid; reporting the grid maximum";
        return res;
    }

    double a = xs[bi - 1], b = xs[bi + 1];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = g(c), fd = g(d);
    while (b - a > 1e-8 * b) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = g(d);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = g(xm);
    if (fm > res.c_value) {
        res.c_value = fm;
        res.argmax_x = xm;
    }
    return res;
}

std::vector<TableEntry> reproduce_tables(const std::vector<double>& nus,
                                         const std::vector<double>& xs) {
    std::vector<TableEntry> out;
    out.reserve(nus.size() * xs.size());
    for (double nu : nus) {
        if (!(nu > 0.5)) {
            throw DomainError("reproduce_tables: requires nu > 1/2 for every row");
        }
        for (double x : xs) {
            EvalResult f = bounds::corollary_f_scaled(nu, x);
            EvalResult l = besseli_scaled(nu, x);
            EvalResult u2 = besseli_scaled(nu + 2.0, x);
            double uval = 2.0 * nu * l.value - (2.0 * nu - 1.0) * u2.value;
            out.push_back(
                {nu, x, 1.0 - l.value / f.value, uval / f.value - 1.0});
        }
    }
    return out;
}

ConjectureReport explore_conjecture(double nu, double n,
                                    std::vector<double> grid_x,
                                    double probe_offset, int probe_points) {
    bounds::AlphaPair ap = bounds::conjecture_alpha(nu, n);
    ConjectureReport rep;
    rep.nu = nu;
    rep.n = n;
    rep.alpha = ap.alpha;
    rep.alpha_prime = ap.alpha_prime;
    rep.beta_probe = ap.alpha - probe_offset;
    rep.notes.push_back(
        "EXPLORATORY: candidate bound; margins are evidence, not certification");

    if (grid_x.empty()) grid_x = logspace(0.1, 50.0, 20);
    const double b = ap.alpha;
    const double m = nu + n - b;
    for (double x : grid_x) {
        try {
            EvalResult integ = integral_k({nu, n, 0.0, x});
            EvalResult bnd = bounds::bound_value(Id::CONJ_BK100, {nu, n, 0.0, x});
            double im = (integ.value - bnd.value) / std::abs(integ.value);
            // Derivative comparison, normalized by K_{nu+n}(x)/x^nu and
            // assembled from the symmetric derivative formula
            //   (K_m/x^nu)' = -(K_{m-1}+K_{m+1})/(2 x^nu) - (nu/x) K_m/x^nu,
            // which avoids the removable 1/(nu+n-b) singularity.
            double kt = besselk_scaled(nu + n, x).value;
            double dm = 1.0 - (0.5 * (besselk_scaled(m - 1.0, x).value +
                                      besselk_scaled(m + 1.0, x).value) +
                               (nu / x) * besselk_scaled(m, x).value) /
                                  kt;
            rep.points.push_back({x, im, dm});
        } catch (const std::exception& e) {
            ++rep.flagged_points;
            rep.notes.push_back(std::string("evaluation failed at x=") +
                                std::to_string(x) + ": " + e.what());
        }
    }

    const double beta = rep.beta_probe;
    for (double x : logspace(0.1, 600.0, probe_points)) {
        try {
            EvalResult integ = integral_k({nu, n, 0.0, x});
            double bv = besselk_scaled(nu + n - beta, x).value *
                        std::exp(-x - nu * std::log(x));
            double pm = (integ.value - bv) / std::abs(integ.value);
            rep.probe.push_back({x, pm});
            if (pm < 0.0 && !rep.probe_found_negative) {
                rep.probe_found_negative = true;
                rep.probe_first_negative_x = x;
            }
        } catch (const std::exception& e) {
            ++rep.flagged_points;
            rep.notes.push_back(std::string("probe evaluation failed at x=") +
                                std::to_string(x) + ": " + e.what());
        }
    }
    return rep;
}

}  // namespace besseline::verification
