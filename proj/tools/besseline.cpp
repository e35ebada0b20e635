// besseline command line tool: evaluate Bessel functions, tilted integrals
// and closed-form bounds, run grid certification sweeps, reproduce the
// corollary error tables, and explore the optimal-order conjecture.
//
// Exit codes: 0 success, 1 verification found violations, 2 bad flags,
// 3 domain/overflow/convergence errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "besseline/bounds.hpp"
#include "besseline/quadrature.hpp"
#include "besseline/special_functions.hpp"
#include "besseline/verification.hpp"

namespace {

namespace bl = besseline;
using json = nlohmann::ordered_json;
using Id = bl::bounds::InequalityId;

std::string fmt10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// Round-trip through the 10-significant-digit text form so JSON output is
// byte-identical across runs and platforms.
json jnum(double v) {
    if (!std::isfinite(v)) return nullptr;
    return json(std::stod(fmt10(v)));
}

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return fmt10(v.get<double>());
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q += c;
        }
        q += "\"";
        return q;
    }
    return s;
}

struct Output {
    std::string command;
    json params = json::object();
    std::vector<json> results;
    std::vector<json> csv_records;  // flat rows; empty means reuse results
    std::vector<std::string> warnings;
    std::string human;
    int exit_code = 0;
};

std::string render(const Output& o, const std::string& format) {
    if (format == "json") {
        json env;
        env["command"] = o.command;
        env["params"] = o.params;
        env["results"] = o.results;
        env["warnings"] = o.warnings;
        env["version"] = "0.1.0";
        return env.dump(2) + "\n";
    }
    if (format == "csv") {
        const std::vector<json>& recs =
            o.csv_records.empty() ? o.results : o.csv_records;
        if (recs.empty()) return "";
        std::string out;
        bool first = true;
        for (auto it = recs.front().begin(); it != recs.front().end(); ++it) {
            if (!first) out += ",";
            out += it.key();
            first = false;
        }
        out += "\n";
        for (const json& r : recs) {
            first = true;
            for (auto it = r.begin(); it != r.end(); ++it) {
                if (!first) out += ",";
                out += csv_cell(it.value());
                first = false;
            }
            out += "\n";
        }
        return out;
    }
    return o.human;
}

bool is_lemma_id(Id id) {
    return id == Id::LEM_A1 || id == Id::LEM_A2 || id == Id::SEGURA_RATIO ||
           id == Id::NASELL_RATIO;
}

bool is_corollary_id(Id id) {
    return id == Id::DOB22_L || id == Id::DOB22_U || id == Id::RELERR_MAJORANT;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "besseline: bounds, quadrature and certification for exponentially "
        "tilted modified Bessel integrals"};
    app.require_subcommand(1);
    std::string format = "human";
    std::string out_path;
    app.add_option("--format", format, "output format: json, csv or human")
        ->check(CLI::IsMember({"json", "csv", "human"}));
    app.add_option("--out", out_path, "write the report to this file");

    Output out;

    const auto ineq_name = CLI::Validator(
        [](std::string& s) -> std::string {
            if (bl::bounds::from_string(s)) return {};
            return "unknown inequality id: " + s;
        },
        "INEQ");
    const auto ineq_name_or_all = CLI::Validator(
        [](std::string& s) -> std::string {
            if (s == "all" || bl::bounds::from_string(s)) return {};
            return "unknown inequality id: " + s;
        },
        "INEQ|all");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate one quantity at a point");
    eval->require_subcommand(1)->fallthrough();

    std::string eb_kind;
    double eb_nu = 0.0, eb_x = 0.0;
    bool eb_scaled = false;
    auto* eb = eval->add_subcommand("bessel", "modified Bessel function I or K");
    eb->fallthrough();
    eb->add_option("--kind", eb_kind, "I or K")
        ->required()
        ->check(CLI::IsMember({"I", "K"}));
    eb->add_option("--nu", eb_nu, "order")->required();
    eb->add_option("--x", eb_x, "argument")->required();
    eb->add_flag("--scaled", eb_scaled,
                 "remove the dominant exponential: e^-x I, e^x K");
    eb->callback([&] {
        bl::EvalResult r;
        if (eb_kind == "I") {
            r = eb_scaled ? bl::besseli_scaled(eb_nu, eb_x)
                          : bl::besseli(eb_nu, eb_x);
        } else {
            r = eb_scaled ? bl::besselk_scaled(eb_nu, eb_x)
                          : bl::besselk(eb_nu, eb_x);
        }
        out.command = "eval bessel";
        out.params = {{"kind", eb_kind},
                      {"nu", jnum(eb_nu)},
                      {"x", jnum(eb_x)},
                      {"scaled", eb_scaled}};
        json rec = out.params;
        rec["value"] = jnum(r.value);
        rec["abs_error_bound"] = jnum(r.abs_error_bound);
        out.results.push_back(rec);
        out.human = fmt10(r.value) + "\n";
    });

    std::string ei_family;
    double ei_nu = 0.0, ei_n = 0.0, ei_gamma = 0.0, ei_x = 0.0, ei_rtol = 1e-10;
    auto* ei = eval->add_subcommand(
        "integral", "tilted integral of the I family (over (0,x]) or K family "
                    "(over [x,inf))");
    ei->fallthrough();
    ei->add_option("--family", ei_family, "I or K")
        ->required()
        ->check(CLI::IsMember({"I", "K"}));
    ei->add_option("--nu", ei_nu, "weight exponent nu")->required();
    ei->add_option("--n", ei_n, "order shift n");
    ei->add_option("--gamma", ei_gamma, "tilt gamma");
    ei->add_option("--x", ei_x, "endpoint x")->required();
    ei->add_option("--rel-tol", ei_rtol, "quadrature relative tolerance")
        ->check(CLI::PositiveNumber);
    ei->callback([&] {
        bl::IntegralSpec spec{ei_family == "I" ? bl::IntegralFamily::I
                                               : bl::IntegralFamily::K,
                              {ei_nu, ei_n, ei_gamma, ei_x},
                              ei_rtol};
        bl::EvalResult r = bl::evaluate(spec);
        out.command = "eval integral";
        out.params = {{"family", ei_family}, {"nu", jnum(ei_nu)},
                      {"n", jnum(ei_n)},     {"gamma", jnum(ei_gamma)},
                      {"x", jnum(ei_x)},     {"rel_tol", jnum(ei_rtol)}};
        json rec = out.params;
        rec["value"] = jnum(r.value);
        rec["abs_error_bound"] = jnum(r.abs_error_bound);
        out.results.push_back(rec);
        out.human = fmt10(r.value) + "\n";
    });

    double eg_x = 0.0;
    auto* eg = eval->add_subcommand("gamma", "gamma function");
    eg->fallthrough();
    eg->add_option("--x", eg_x, "argument")->required();
    eg->callback([&] {
        bl::EvalResult r = bl::gamma(eg_x);
        out.command = "eval gamma";
        out.params = {{"x", jnum(eg_x)}};
        json rec = out.params;
        rec["value"] = jnum(r.value);
        rec["abs_error_bound"] = jnum(r.abs_error_bound);
        out.results.push_back(rec);
        out.human = fmt10(r.value) + "\n";
    });

    // bounds
    std::string bo_ineq;
    double bo_nu = 0.0, bo_n = 0.0, bo_gamma = 0.0, bo_x = 0.0, bo_cnun = 0.0;
    auto* bo = app.add_subcommand(
        "bounds", "evaluate one closed-form bound at a point, with the "
                  "integral it bounds when applicable");
    bo->fallthrough();
    bo->add_option("--ineq", bo_ineq, "inequality id, see README for the list")
        ->required()
        ->check(ineq_name);
    bo->add_option("--nu", bo_nu, "weight exponent nu")->required();
    bo->add_option("--n", bo_n, "order shift n");
    bo->add_option("--gamma", bo_gamma, "tilt gamma");
    bo->add_option("--x", bo_x, "abscissa")->required();
    auto* bo_copt = bo->add_option(
        "--cnun", bo_cnun, "constant C for BI7/BI8; computed cap used if absent");
    bo->callback([&] {
        Id id = *bl::bounds::from_string(bo_ineq);
        bl::Params p{bo_nu, bo_n, bo_gamma, bo_x};
        bl::bounds::BoundOptions opts;
        if (bo_copt->count() > 0) opts.cnun = bo_cnun;
        auto dc = bl::bounds::check_domain(id, p, opts);
        if (!dc.ok) {
            throw bl::DomainError("hypothesis not satisfied for " + bo_ineq +
                                  ": " + dc.failed_hypothesis);
        }
        out.command = "bounds";
        out.params = {{"ineq", bo_ineq},       {"nu", jnum(bo_nu)},
                      {"n", jnum(bo_n)},       {"gamma", jnum(bo_gamma)},
                      {"x", jnum(bo_x)}};
        if (bo_copt->count() > 0) out.params["cnun"] = jnum(bo_cnun);
        const bool upper = bl::bounds::side_of(id) == bl::bounds::BoundSide::upper;
        json rec;
        rec["inequality"] = bo_ineq;
        rec["side"] = upper ? "upper" : "lower";
        rec["nu"] = jnum(bo_nu);
        rec["n"] = jnum(bo_n);
        rec["gamma"] = jnum(bo_gamma);
        rec["x"] = jnum(bo_x);
        std::string body;
        if (is_lemma_id(id)) {
            bl::EvalResult m = bl::bounds::lemma_margin(id, p);
            rec["margin"] = jnum(m.value);
            rec["margin_error"] = jnum(m.abs_error_bound);
            body = "margin = " + fmt10(m.value) + "\n";
        } else if (id == Id::RELERR_MAJORANT) {
            bl::EvalResult maj = bl::bounds::bound_value(id, p, opts);
            bl::EvalResult f = bl::bounds::corollary_f_scaled(bo_nu, bo_x);
            bl::EvalResult l = bl::besseli_scaled(bo_nu, bo_x);
            bl::EvalResult u2 = bl::besseli_scaled(bo_nu + 2.0, bo_x);
            double uval =
                2.0 * bo_nu * l.value - (2.0 * bo_nu - 1.0) * u2.value;
            double rl = 1.0 - l.value / f.value;
            double ru = uval / f.value - 1.0;
            rec["majorant"] = jnum(maj.value);
            rec["relerr_l"] = jnum(rl);
            rec["relerr_u"] = jnum(ru);
            rec["margin"] = jnum(maj.value - std::max(rl, ru));
            body = "majorant = " + fmt10(maj.value) +
                   "\nrelerr_l = " + fmt10(rl) + "\nrelerr_u = " + fmt10(ru) +
                   "\nmargin   = " + fmt10(maj.value - std::max(rl, ru)) + "\n";
        } else if (id == Id::DOB22_L || id == Id::DOB22_U) {
            bl::EvalResult b = bl::bounds::bound_value(id, p, opts);
            bl::EvalResult f = bl::bounds::corollary_f(bo_nu, bo_x);
            double sign = upper ? 1.0 : -1.0;
            double rm = sign * (b.value - f.value) / std::abs(f.value);
            rec["bound"] = jnum(b.value);
            rec["bound_error"] = jnum(b.abs_error_bound);
            rec["f_value"] = jnum(f.value);
            rec["f_error"] = jnum(f.abs_error_bound);
            rec["rel_margin"] = jnum(rm);
            body = "bound      = " + fmt10(b.value) +
                   "\nF          = " + fmt10(f.value) +
                   "\nrel margin = " + fmt10(rm) + "\n";
        } else {
            bl::EvalResult b = bl::bounds::bound_value(id, p, opts);
            bl::EvalResult integ = bl::verification::comparison_integral(id, p);
            double sign = upper ? 1.0 : -1.0;
            double rm = sign * (b.value - integ.value) / std::abs(integ.value);
            rec["bound"] = jnum(b.value);
            rec["bound_error"] = jnum(b.abs_error_bound);
            rec["integral"] = jnum(integ.value);
            rec["integral_error"] = jnum(integ.abs_error_bound);
            rec["rel_margin"] = jnum(rm);
            body = "bound      = " + fmt10(b.value) +
                   "\nintegral   = " + fmt10(integ.value) +
                   "\nrel margin = " + fmt10(rm) + "\n";
            if (id == Id::CONJ_BK100) {
                out.warnings.push_back(
                    "EXPLORATORY: candidate bound; margins are evidence, not "
                    "certification");
            }
        }
        const char* eq = bl::bounds::equality_cases(id);
        if (*eq) rec["equality"] = eq;
        out.results.push_back(rec);
        out.human = bo_ineq + std::string(upper ? " (upper" : " (lower") +
                    " bound) at nu=" + fmt10(bo_nu) + ", n=" + fmt10(bo_n) +
                    ", gamma=" + fmt10(bo_gamma) + ", x=" + fmt10(bo_x) + "\n" +
                    body;
        if (*eq) out.human += std::string("equality: ") + eq + "\n";
    });

    // verify
    std::string ve_ineq, ve_grid = "default";
    double ve_tol = 1e-9;
    std::vector<double> ve_nus, ve_ns, ve_gammas, ve_xs;
    auto* ve = app.add_subcommand(
        "verify", "sweep an inequality over a parameter grid and report "
                  "violations, margins and tightness");
    ve->fallthrough();
    ve->add_option("--ineq", ve_ineq, "inequality id or 'all'")
        ->required()
        ->check(ineq_name_or_all);
    ve->add_option("--grid", ve_grid, "base grid (only 'default')")
        ->check(CLI::IsMember({"default"}));
    ve->add_option("--tol", ve_tol, "violation tolerance")
        ->check(CLI::PositiveNumber);
    ve->add_option("--nus", ve_nus, "override nu list")->delimiter(',');
    ve->add_option("--ns", ve_ns, "override n list")->delimiter(',');
    ve->add_option("--gammas", ve_gammas, "override gamma list")->delimiter(',');
    ve->add_option("--xs", ve_xs, "override x list")->delimiter(',');
    ve->callback([&] {
        std::vector<Id> ids;
        if (ve_ineq == "all") {
            const Id* a = bl::bounds::all_ids();
            ids.assign(a, a + bl::bounds::kInequalityCount);
        } else {
            ids.push_back(*bl::bounds::from_string(ve_ineq));
        }
        out.command = "verify";
        out.params = {{"ineq", ve_ineq}, {"grid", ve_grid}, {"tol", jnum(ve_tol)}};
        long total_violations = 0;
        std::string human;
        for (Id id : ids) {
            bl::verification::GridSpec grid = bl::verification::default_grid(id);
            if (!ve_nus.empty()) grid.nus = ve_nus;
            if (!ve_ns.empty()) grid.ns = ve_ns;
            if (!ve_gammas.empty()) grid.gammas = ve_gammas;
            if (!ve_xs.empty()) grid.xs = ve_xs;
            auto rep = bl::verification::verify_inequality(id, grid, ve_tol);
            total_violations += static_cast<long>(rep.violations.size());

            json rec;
            rec["inequality"] = bl::bounds::to_string(id);
            rec["points_checked"] = rep.points_checked;
            rec["violation_count"] = static_cast<long>(rep.violations.size());
            rec["min_margin"] = jnum(rep.min_margin);
            rec["flagged_points"] = rep.flagged_points;
            rec["passed"] = rep.passed();
            json viols = json::array();
            for (const auto& v : rep.violations) {
                viols.push_back({{"nu", jnum(v.params.nu)},
                                 {"n", jnum(v.params.n)},
                                 {"gamma", jnum(v.params.gamma)},
                                 {"x", jnum(v.params.x)},
                                 {"rel_margin", jnum(v.rel_margin)}});
            }
            rec["violations"] = viols;
            json tight = json::array();
            for (const auto& t : rep.tightness) {
                tight.push_back({{"nu", jnum(t.nu)},
                                 {"n", jnum(t.n)},
                                 {"gamma", jnum(t.gamma)},
                                 {"x", jnum(t.x)},
                                 {"ratio", jnum(t.ratio)}});
            }
            rec["tightness"] = tight;
            json fits = json::array();
            for (const auto& f : rep.fits) {
                fits.push_back({{"nu", jnum(f.nu)},
                                {"n", jnum(f.n)},
                                {"gamma", jnum(f.gamma)},
                                {"fitted_c", jnum(f.fitted_c)},
                                {"predicted_c", jnum(f.predicted_c)},
                                {"flagged", f.flagged}});
            }
            rec["fits"] = fits;
            rec["notes"] = rep.notes;
            out.results.push_back(rec);

            json flat;
            flat["inequality"] = bl::bounds::to_string(id);
            flat["points_checked"] = rep.points_checked;
            flat["violation_count"] = static_cast<long>(rep.violations.size());
            flat["min_margin"] = jnum(rep.min_margin);
            flat["flagged_points"] = rep.flagged_points;
            flat["passed"] = rep.passed();
            out.csv_records.push_back(flat);

            human += std::string(bl::bounds::to_string(id)) + ": " +
                     std::to_string(rep.points_checked) + " points, " +
                     std::to_string(rep.violations.size()) + " violations, " +
                     "min margin " + fmt10(rep.min_margin) + ", " +
                     std::to_string(rep.flagged_points) +
                     " failed evaluations -> " +
                     (rep.passed() ? "PASS" : "FAIL") + "\n";
            std::size_t shown = 0;
            for (const auto& v : rep.violations) {
                if (++shown > 10) {
                    human += "  (further violations omitted)\n";
                    break;
                }
                human += "  violation at nu=" + fmt10(v.params.nu) +
                         " n=" + fmt10(v.params.n) +
                         " gamma=" + fmt10(v.params.gamma) +
                         " x=" + fmt10(v.params.x) +
                         ": margin=" + fmt10(v.rel_margin) + "\n";
            }
            for (const auto& f : rep.fits) {
                if (!f.flagged) continue;
                human += "  tightness fit flagged at nu=" + fmt10(f.nu) +
                         " n=" + fmt10(f.n) + " gamma=" + fmt10(f.gamma) +
                         ": fitted " + fmt10(f.fitted_c) + " vs predicted " +
                         fmt10(f.predicted_c) + "\n";
            }
            for (const auto& note : rep.notes) human += "  note: " + note + "\n";
        }
        if (ids.size() > 1) {
            human += total_violations == 0 ? "overall: PASS\n" : "overall: FAIL\n";
        }
        out.human = human;
        out.exit_code = total_violations > 0 ? 1 : 0;
    });

    // constants cnun
    double cn_nu = 0.0, cn_n = 0.0;
    auto* co = app.add_subcommand("constants", "compute named constants");
    co->require_subcommand(1)->fallthrough();
    auto* cn = co->add_subcommand(
        "cnun", "sup over x of (x^nu / I_{nu+n}(x)) * integral of I_{nu+n}/t^nu");
    cn->fallthrough();
    cn->add_option("--nu", cn_nu, "weight exponent nu")->required();
    cn->add_option("--n", cn_n, "order shift n");
    cn->callback([&] {
        auto r = bl::verification::compute_cnun(cn_nu, cn_n);
        out.command = "constants cnun";
        out.params = {{"nu", jnum(cn_nu)}, {"n", jnum(cn_n)}};
        json rec;
        rec["nu"] = jnum(r.nu);
        rec["n"] = jnum(r.n);
        rec["c_value"] = jnum(r.c_value);
        rec["argmax_x"] = jnum(r.argmax_x);
        rec["upper_cap"] = jnum(r.upper_cap);
        rec["bracketed"] = r.bracketed;
        out.results.push_back(rec);
        if (!r.warning.empty()) out.warnings.push_back(r.warning);
        out.human = "C(nu=" + fmt10(cn_nu) + ", n=" + fmt10(cn_n) +
                    ") = " + fmt10(r.c_value) + "  (argmax x = " +
                    fmt10(r.argmax_x) + ", cap 2(nu+n+1) = " +
                    fmt10(r.upper_cap) + ")\n";
        if (!r.warning.empty()) out.human += "warning: " + r.warning + "\n";
    });

    // tables corollary
    std::vector<double> tb_nus = {1.0, 2.5, 5.0, 7.5, 10.0};
    std::vector<double> tb_xs = {0.5, 5.0, 10.0, 25.0, 50.0, 100.0, 250.0};
    auto* ta = app.add_subcommand("tables", "reproduce report tables");
    ta->require_subcommand(1)->fallthrough();
    auto* tc = ta->add_subcommand(
        "corollary",
        "relative error of the sandwich L < F < U of the cumulative-sum "
        "transform F against scaled Bessel bounds");
    tc->fallthrough();
    tc->add_option("--nus", tb_nus, "row orders nu (> 1/2)")->delimiter(',');
    tc->add_option("--xs", tb_xs, "column abscissas x")->delimiter(',');
    tc->callback([&] {
        auto entries = bl::verification::reproduce_tables(tb_nus, tb_xs);
        out.command = "tables corollary";
        json jnus = json::array(), jxs = json::array();
        for (double v : tb_nus) jnus.push_back(jnum(v));
        for (double v : tb_xs) jxs.push_back(jnum(v));
        out.params = {{"nus", jnus}, {"xs", jxs}};
        for (const auto& e : entries) {
            json rec;
            rec["nu"] = jnum(e.nu);
            rec["x"] = jnum(e.x);
            rec["relerr_l"] = jnum(e.relerr_l);
            rec["relerr_u"] = jnum(e.relerr_u);
            out.results.push_back(rec);
        }
        char buf[64];
        std::string human;
        auto table = [&](const char* title, bool lower) {
            human += title;
            human += "\n";
            std::snprintf(buf, sizeof(buf), "%9s", "nu \\ x");
            human += buf;
            for (double x : tb_xs) {
                std::snprintf(buf, sizeof(buf), " %8.4g", x);
                human += buf;
            }
            human += "\n";
            for (std::size_t i = 0; i < tb_nus.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%9.3g", tb_nus[i]);
                human += buf;
                for (std::size_t j = 0; j < tb_xs.size(); ++j) {
                    const auto& e = entries[i * tb_xs.size() + j];
                    std::snprintf(buf, sizeof(buf), " %8.4f",
                                  lower ? e.relerr_l : e.relerr_u);
                    human += buf;
                }
                human += "\n";
            }
        };
        table("relative error of the lower bound, 1 - L/F", true);
        human += "\n";
        table("relative error of the upper bound, U/F - 1", false);
        out.human = human;
    });

    // conjecture
    double cj_nu = 0.0, cj_n = 0.0, cj_offset = 0.1;
    int cj_points = 20, cj_probe_points = 160;
    auto* cj = app.add_subcommand(
        "conjecture", "exploratory margins for the candidate optimal-order "
                      "lower bound and its beta probe");
    cj->fallthrough();
    cj->add_option("--nu", cj_nu, "weight exponent nu")->required();
    cj->add_option("--n", cj_n, "order shift n");
    cj->add_option("--points", cj_points, "log-spaced x points on [0.1, 50]")
        ->check(CLI::Range(2, 100000));
    cj->add_option("--probe-points", cj_probe_points,
                   "log-spaced probe points on [0.1, 600]")
        ->check(CLI::Range(2, 1000000));
    cj->add_option("--probe-offset", cj_offset, "probe uses beta = alpha - offset")
        ->check(CLI::PositiveNumber);
    cj->callback([&] {
        auto grid = bl::verification::logspace(0.1, 50.0, cj_points);
        auto rep = bl::verification::explore_conjecture(cj_nu, cj_n, grid,
                                                        cj_offset,
                                                        cj_probe_points);
        out.command = "conjecture";
        out.params = {{"nu", jnum(cj_nu)},
                      {"n", jnum(cj_n)},
                      {"points", cj_points},
                      {"probe_points", cj_probe_points},
                      {"probe_offset", jnum(cj_offset)}};
        json rec;
        rec["nu"] = jnum(rep.nu);
        rec["n"] = jnum(rep.n);
        rec["alpha"] = jnum(rep.alpha);
        rec["alpha_prime"] = jnum(rep.alpha_prime);
        rec["beta_probe"] = jnum(rep.beta_probe);
        json pts = json::array();
        for (const auto& cp : rep.points) {
            pts.push_back({{"x", jnum(cp.x)},
                           {"integral_margin", jnum(cp.integral_margin)},
                           {"derivative_margin", jnum(cp.derivative_margin)}});
            json flat;
            flat["x"] = jnum(cp.x);
            flat["integral_margin"] = jnum(cp.integral_margin);
            flat["derivative_margin"] = jnum(cp.derivative_margin);
            out.csv_records.push_back(flat);
        }
        rec["points"] = pts;
        json probe = json::array();
        for (const auto& pp : rep.probe) {
            probe.push_back(
                {{"x", jnum(pp.x)}, {"integral_margin", jnum(pp.integral_margin)}});
        }
        rec["probe"] = probe;
        rec["probe_found_negative"] = rep.probe_found_negative;
        rec["probe_first_negative_x"] = rep.probe_found_negative
                                            ? jnum(rep.probe_first_negative_x)
                                            : json();
        rec["flagged_points"] = rep.flagged_points;
        rec["notes"] = rep.notes;
        out.results.push_back(rec);
        for (const auto& note : rep.notes) out.warnings.push_back(note);

        std::string human = "conjecture margins at nu=" + fmt10(cj_nu) +
                            ", n=" + fmt10(cj_n) + "\n" +
                            "alpha = " + fmt10(rep.alpha) +
                            ", alpha' = " + fmt10(rep.alpha_prime) +
                            ", probe beta = " + fmt10(rep.beta_probe) + "\n";
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%12s %18s %18s\n", "x",
                      "integral margin", "derivative margin");
        human += buf;
        for (const auto& cp : rep.points) {
            std::snprintf(buf, sizeof(buf), "%12.6g %18.10g %18.10g\n", cp.x,
                          cp.integral_margin, cp.derivative_margin);
            human += buf;
        }
        if (rep.probe_found_negative) {
            human += "probe: first negative margin at x = " +
                     fmt10(rep.probe_first_negative_x) + "\n";
        } else {
            human += "probe: no negative margin found\n";
        }
        human += "failed evaluations: " + std::to_string(rep.flagged_points) + "\n";
        for (const auto& note : rep.notes) human += "note: " + note + "\n";
        out.human = human;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const bl::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const bl::OverflowSignal& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return 3;
    } catch (const bl::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    std::string text = render(out, format);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "error: cannot open output file " << out_path << "\n";
            return 3;
        }
        f << text;
    } else {
        std::cout << text;
    }
    return out.exit_code;
}
