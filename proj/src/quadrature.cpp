#include "besseline/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "besseline/special_functions.hpp"

namespace besseline {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Gauss-Kronrod 7-15 pair.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a, b;
    double val, err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 3; ++j) {
        int jj = 2 * j + 1;
        double f1 = f(c - h * kXgk[jj]);
        double f2 = f(c + h * kXgk[jj]);
        fv1[jj] = f1;
        fv2[jj] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jj] * (f1 + f2);
        resabs += kWgk[jj] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        int jj = 2 * j;
        double f1 = f(c - h * kXgk[jj]);
        double f2 = f(c + h * kXgk[jj]);
        fv1[jj] = f1;
        fv2[jj] = f2;
        resk += kWgk[jj] * (f1 + f2);
        resabs += kWgk[jj] * (std::abs(f1) + std::abs(f2));
    }
    double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    double value = resk * h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double abserr = std::abs((resk - resg) * h);
    if (resasc != 0.0 && abserr != 0.0) {
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    }
    double round = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    abserr = std::max(abserr, round);
    if (!std::isfinite(value)) {
        throw OverflowSignal("quadrature: integrand not representable");
    }
    return {a, b, value, abserr};
}

struct QuadOutcome {
    double value;
    double err;
    bool converged;
};

bool panel_less(const Panel& p, const Panel& q) { return p.err < q.err; }

double kahan_sum(const std::vector<Panel>& v, bool errs) {
    double s = 0.0, comp = 0.0;
    for (const Panel& p : v) {
        double y = (errs ? p.err : p.val) - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

QuadOutcome adaptive_gk(const std::function<double(double)>& f,
                        const std::vector<std::pair<double, double>>& seeds,
                        double rel_target, double abs_floor,
                        int max_panels = 40000) {
    std::vector<Panel> heap;
    heap.reserve(seeds.size() + 64);
    for (auto [a, b] : seeds) {
        if (b > a) heap.push_back(gk15(f, a, b));
    }
    std::make_heap(heap.begin(), heap.end(), panel_less);
    double total = kahan_sum(heap, false);
    double toterr = kahan_sum(heap, true);
    int since_resum = 0;
    while (static_cast<int>(heap.size()) < max_panels) {
        double target = std::max(rel_target * std::abs(total), abs_floor);
        if (toterr <= target) break;
        std::pop_heap(heap.begin(), heap.end(), panel_less);
        Panel worst = heap.back();
        heap.pop_back();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push_back(worst);  // width at rounding limit, give up on it
            std::push_heap(heap.begin(), heap.end(), panel_less);
            break;
        }
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.val + right.val - worst.val;
        toterr += left.err + right.err - worst.err;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), panel_less);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), panel_less);
        if (++since_resum >= 4096) {
            total = kahan_sum(heap, false);
            toterr = kahan_sum(heap, true);
            since_resum = 0;
        }
    }
    total = kahan_sum(heap, false);
    toterr = kahan_sum(heap, true);
    bool ok = toterr <= std::max(rel_target * std::abs(total), abs_floor);
    return {total, toterr, ok};
}

// geometric panel seeds from a to b, first panel ~ first_len, ratio 1.7
std::vector<std::pair<double, double>> geometric_seeds(double a, double b,
                                                       double first_len) {
    std::vector<std::pair<double, double>> out;
    double c = a;
    double len = std::max(first_len, (b - a) * 1e-12);
    while (c < b) {
        double d = std::min(b, c + len);
        out.emplace_back(c, d);
        c = d;
        len *= 1.7;
    }
    return out;
}

// E(s, y) = integral over (0,1] of u^{s-1} e^{-y u} du, s > 0, |y| <= 1
double exp_moment(double s, double y) {
    double term = 1.0, sum = 1.0 / s;
    for (int j = 1; j < 60; ++j) {
        term *= -y / j;
        double add = term / (s + j);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double clamp_rel_tol(double rel_tol) {
    return std::min(1e-3, std::max(1e-14, rel_tol));
}

void check_params(const Params& p, const char* fn) {
    if (!std::isfinite(p.nu) || !std::isfinite(p.n) || !std::isfinite(p.gamma) ||
        !std::isfinite(p.x)) {
        throw DomainError(std::string(fn) + ": non-finite parameter");
    }
    if (p.x <= 0.0) throw DomainError(std::string(fn) + ": requires x > 0");
}

// head piece of the I-family: integral over (0, delta] by termwise series,
//   sum_k (delta/2)^{mu+2k} delta^{1-nu} / (k! Gamma(mu+k+1)) E(n+2k+1, g d)
double integral_i_head(double nu, double n, double gamma, double delta,
                       double* err_out) {
    double mu = nu + n;
    double base = std::exp((mu)*std::log(0.5 * delta) + (1.0 - nu) * std::log(delta)) *
                  rgamma(mu + 1.0);
    double y = gamma * delta;
    double sum = 0.0, comp = 0.0;
    double last = 0.0;
    for (int k = 0; k < 80; ++k) {
        double term = base * exp_moment(n + 2.0 * k + 1.0, y);
        double t = term - comp;
        double tmp = sum + t;
        comp = (tmp - sum) - t;
        sum = tmp;
        last = term;
        if (term < 1e-18 * sum) break;
        base *= 0.25 * delta * delta / ((k + 1.0) * (mu + k + 1.0));
    }
    *err_out = 2.0 * last + std::abs(sum) * 5e-16;
    return sum;
}

}  // namespace

EvalResult integral_i(const Params& p, double rel_tol) {
    if (!std::isfinite(p.nu) || !std::isfinite(p.n) || !std::isfinite(p.gamma) ||
        !std::isfinite(p.x)) {
        throw DomainError("integral_i: non-finite parameter");
    }
    if (p.n <= -1.0) {
        throw DomainError("integral_i: requires n > -1 (integrand divergent at 0)");
    }
    if (p.x == 0.0) return {0.0, 0.0};
    if (p.x < 0.0) throw DomainError("integral_i: requires x >= 0");
    rel_tol = clamp_rel_tol(rel_tol);
    double mu = p.nu + p.n;
    double a = 1.0 - p.gamma;

    double delta = std::min(p.x, 1.0) * 1e-2;
    if (std::abs(p.gamma) * delta > 1.0) delta = 1.0 / std::abs(p.gamma);

    double head_err = 0.0;
    double head = integral_i_head(p.nu, p.n, p.gamma, delta, &head_err);

    // overflow probe: integrand peak in log form
    {
        double lg_end = a * p.x - p.nu * std::log(p.x);
        if (lg_end > 706.0) {
            throw OverflowSignal("integral_i: integral exceeds double range");
        }
    }

    auto f = [&](double t) {
        return std::exp(a * t - p.nu * std::log(t)) *
               besseli_scaled(mu, t).value;
    };
    auto seeds = geometric_seeds(delta, p.x, std::min(delta * 0.5, 0.25));
    QuadOutcome body = adaptive_gk(f, seeds, rel_tol * 0.4, head_err * 0.25 + 1e-305);

    double value = head + body.value;
    double hard_err = head_err + body.err;
    double err = hard_err + std::abs(value) * 3e-14;
    if (hard_err > 2.0 * rel_tol * std::abs(value) && hard_err > 1e-300) {
        throw ConvergenceError("integral_i: tolerance not achieved",
                               EvalResult{value, err});
    }
    return {value, err};
}

EvalResult integral_k(const Params& p, double rel_tol) {
    check_params(p, "integral_k");
    if (p.gamma > 1.0) {
        throw DomainError("integral_k: requires gamma <= 1 (divergent otherwise)");
    }
    if (p.gamma == 1.0 && p.nu <= 0.5) {
        throw DomainError(
            "integral_k: gamma = 1 requires nu > 1/2 (divergent otherwise)");
    }
    rel_tol = clamp_rel_tol(rel_tol);
    double mu = p.nu + p.n;
    double a = 1.0 - p.gamma;

    // overflow probe at the left endpoint (integrand maximum for our domains)
    {
        double lkt = std::log(besselk_scaled(mu, p.x).value);
        double lg = p.gamma * p.x - p.nu * std::log(p.x) + lkt - p.x;
        if (lg > 706.0) {
            throw OverflowSignal("integral_k: integral exceeds double range");
        }
    }

    auto f = [&](double t) {
        return std::exp(-a * t - p.nu * std::log(t)) *
               besselk_scaled(mu, t).value;
    };

    if (p.gamma < 1.0) {
        double T = p.x + std::max(40.0, 40.0 / a);
        double body = 0.0, body_err = 0.0;
        double lo = p.x;
        double tail_bound;
        for (int round = 0;; ++round) {
            auto seeds = geometric_seeds(lo, T, std::min(1.0, lo * 0.5));
            QuadOutcome q = adaptive_gk(f, seeds, rel_tol * 0.4,
                                        std::abs(body) * rel_tol * 0.1 + 1e-305);
            body += q.value;
            body_err += q.err;
            double growth = std::max(0.0, -p.nu) / T;
            if (a - growth < 0.5 * a) {
                tail_bound = std::numeric_limits<double>::infinity();
            } else {
                tail_bound = besselk_scaled(mu, T).value *
                             std::exp(-a * T - p.nu * std::log(T)) /
                             (a - growth);
            }
            if (tail_bound <= std::max(rel_tol * std::abs(body) * 0.25,
                                       body_err * 0.5) ||
                round >= 6) {
                break;
            }
            lo = T;
            T *= 2.0;
        }
        double value = body;
        double hard_err = body_err + tail_bound;
        double err = hard_err + std::abs(value) * 3e-14;
        if (!std::isfinite(hard_err) ||
            (hard_err > 2.0 * rel_tol * std::abs(value) && hard_err > 1e-300)) {
            throw ConvergenceError("integral_k: tolerance not achieved",
                                   EvalResult{value, err});
        }
        return {value, err};
    }

    // gamma == 1, nu > 1/2: algebraic tail, evaluated by the K asymptotic
    // series integrated termwise: sqrt(pi/2) sum A_k T^{1/2-nu-k}/(nu-1/2+k)
    double T = std::max({2.0 * p.x, 100.0, 8.0 * mu * mu});
    double tail = 0.0, tail_err = 0.0;
    for (int round = 0;; ++round) {
        double A = 1.0, t_sum = 0.0, t_last = std::numeric_limits<double>::infinity();
        double omitted = 0.0;
        for (int k = 0; k < 40; ++k) {
            double term = A * std::exp((0.5 - p.nu - k) * std::log(T)) /
                          (p.nu - 0.5 + k);
            if (std::abs(term) >= std::abs(t_last)) {
                omitted = std::abs(term);
                break;
            }
            t_sum += term;
            t_last = term;
            omitted = std::abs(term) * 0.5;  // refreshed if loop breaks above
            A *= (4.0 * mu * mu - (2.0 * k + 1.0) * (2.0 * k + 1.0)) /
                 (8.0 * (k + 1.0));
        }
        tail = std::sqrt(0.5 * kPi) * t_sum;
        tail_err = std::sqrt(0.5 * kPi) * 2.0 * omitted;
        if (tail_err <= rel_tol * std::abs(tail) || round >= 6) break;
        T *= 2.0;
    }
    auto seeds = geometric_seeds(p.x, T, std::min(1.0, p.x * 0.5));
    QuadOutcome body = adaptive_gk(f, seeds, rel_tol * 0.4,
                                   std::abs(tail) * rel_tol * 0.1 + 1e-305);
    double value = body.value + tail;
    double hard_err = body.err + tail_err;
    double err = hard_err + std::abs(value) * 3e-14;
    if (hard_err > 2.0 * rel_tol * std::abs(value) && hard_err > 1e-300) {
        throw ConvergenceError("integral_k: tolerance not achieved",
                               EvalResult{value, err});
    }
    return {value, err};
}

EvalResult evaluate(const IntegralSpec& spec) {
    if (spec.family == IntegralFamily::I) {
        return integral_i(spec.params, spec.rel_tol);
    }
    return integral_k(spec.params, spec.rel_tol);
}

namespace closed_form {

EvalResult integral_i_zero_tilt(double nu, double x) {
    if (!(nu > -1.0)) {
        throw DomainError("integral_i_zero_tilt: requires nu > -1");
    }
    if (!(x >= 0.0)) {
        throw DomainError("integral_i_zero_tilt: requires x >= 0");
    }
    if (x == 0.0) return {0.0, 0.0};
    EvalResult h = hyp1f2({0.5, 1.5, nu + 1.0, 0.25 * x * x});
    double pref = x * std::exp(-nu * std::log(2.0)) * rgamma(nu + 1.0);
    double value = pref * h.value;
    return {value, std::abs(pref) * h.abs_error_bound + std::abs(value) * 1e-14};
}

EvalResult antiderivative_k_zero_tilt(double nu, double x) {
    if (nu == std::floor(nu) || nu == 0.5 || !(nu < 1.5)) {
        throw DomainError(
            "antiderivative_k_zero_tilt: requires non-integer nu < 3/2, nu != 1/2");
    }
    if (!(x > 0.0)) {
        throw DomainError("antiderivative_k_zero_tilt: requires x > 0");
    }
    double z = 0.25 * x * x;
    EvalResult f1 = hyp1f2({0.5 - nu, 1.5 - nu, 1.0 - nu, z});
    EvalResult f2 = hyp1f2({0.5, 1.5, nu + 1.0, z});
    double g1 = gamma(1.0 - nu).value;
    double termA = std::exp(nu * std::log(4.0) - 2.0 * nu * std::log(x)) /
                   ((2.0 * nu - 1.0) * g1) * f1.value;
    double termB = rgamma(nu + 1.0) * f2.value;
    double pref = -kPi * x / (std::exp((nu + 1.0) * std::log(2.0)) * sinpi(nu));
    double value = pref * (termA + termB);
    double err = std::abs(pref) * (f1.abs_error_bound + f2.abs_error_bound) +
                 (std::abs(pref * termA) + std::abs(pref * termB)) * 1e-13;
    return {value, err};
}

EvalResult integral_i_unit_tilt(double nu, double x) {
    if (nu == 0.5 || (nu <= 0.0 && nu == std::floor(nu))) {
        throw DomainError(
            "integral_i_unit_tilt: requires nu != 1/2 and nu not in {0,-1,...}");
    }
    if (!(x > 0.0)) {
        throw DomainError("integral_i_unit_tilt: requires x > 0");
    }
    double c = 2.0 * nu - 1.0;
    double lead = std::exp((1.0 - nu) * std::log(2.0)) * rgamma(nu) / c;
    double bes = std::exp((1.0 - nu) * std::log(x)) *
                 (besseli_scaled(nu, x).value + besseli_scaled(nu - 1.0, x).value) / c;
    double value = lead - bes;
    double err = (std::abs(lead) + std::abs(bes)) * 1e-13;
    return {value, err};
}

EvalResult integral_k_unit_tilt(double nu, double x) {
    if (!(nu > 0.5)) {
        throw DomainError("integral_k_unit_tilt: requires nu > 1/2");
    }
    if (!(x > 0.0)) {
        throw DomainError("integral_k_unit_tilt: requires x > 0");
    }
    double value = std::exp((1.0 - nu) * std::log(x)) *
                   (besselk_scaled(nu, x).value + besselk_scaled(nu - 1.0, x).value) /
                   (2.0 * nu - 1.0);
    return {value, std::abs(value) * 1e-13};
}

}  // namespace closed_form

}  // namespace besseline
