#include "gou/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "gou/analysis.hpp"
#include "gou/estimate.hpp"
#include "gou/manifest.hpp"
#include "gou/simulate.hpp"
#include "gou/svg.hpp"
#include "gou/version.hpp"

namespace gou {

namespace {

std::string fmt(double v, const char* spec = "%.12g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Collects this command's outputs, then lands them in the manifest.
class OutputWriter {
public:
    explicit OutputWriter(const std::string& dir) : dir_(dir) {
        std::filesystem::create_directories(dir);
    }

    void write(const std::string& name, const std::string& content) {
        atomic_write(dir_ + "/" + name, content);
        manifest_.files[name] = sha256_hex(content);
    }

    void finalize(const RunConfig& cfg, const std::string& command,
                  const std::string& started,
                  const std::string& condition_summary) {
        manifest_.tool_version = kToolVersion;
        manifest_.config_digest = sha256_hex(render_config(cfg));
        manifest_.seed = cfg.sim.seed;
        manifest_.command = command;
        manifest_.started = started;
        manifest_.finished = iso_now();
        manifest_.condition_summary = condition_summary;
        manifest_.merge_and_write(dir_);
    }

    const std::string& dir() const { return dir_; }

private:
    std::string dir_;
    RunManifest manifest_;
};

Model make_model(const RunConfig& cfg, bool force) {
    if (cfg.model_forced || force) {
        try {
            return Model::validate(cfg.model);
        } catch (const ValidationError& e) {
            if (e.code() == ErrorCode::ConditionAViolation)
                return Model::unchecked(cfg.model);
            throw;
        }
    }
    return Model::validate(cfg.model);
}

std::string condition_summary(const ConditionReport& rep) {
    std::string s = "A=";
    s += verdict_name(rep.cond_a.verdict);
    s += " B=";
    s += verdict_name(rep.cond_b.verdict);
    s += " C=";
    s += verdict_name(rep.cond_c.verdict);
    return s;
}

std::string render_conditions(const ConditionReport& rep) {
    std::ostringstream o;
    o << "A = " << verdict_name(rep.cond_a.verdict) << "\n";
    o << "A_reason = " << rep.cond_a.reason << "\n";
    o << "B = " << verdict_name(rep.cond_b.verdict) << "\n";
    o << "B_reason = " << rep.cond_b.reason << "\n";
    if (rep.cond_b.verdict == Verdict::Verified)
        o << "B_w = " << fmt(rep.w) << "\n";
    o << "C = " << verdict_name(rep.cond_c.verdict) << "\n";
    o << "C_reason = " << rep.cond_c.reason << "\n";
    if (rep.cond_c.verdict == Verdict::Verified) {
        o << "C_epsilon = " << fmt(rep.epsilon) << "\n";
        o << "C_p = " << fmt(rep.p) << "\n";
        o << "C_q = " << fmt(rep.q) << "\n";
    }
    return o.str();
}

std::string render_profile(const Model& model, const CramerProfile& prof) {
    std::ostringstream o;
    o << "model = " << model.describe() << "\n";
    o << "w = " << fmt(prof.w) << "\n";
    o << "mu_star = " << fmt(prof.mu_star) << "\n";
    o << "alpha0 = " << fmt(prof.alpha0) << "\n";
    o << "x0 = " << fmt(prof.x0) << "\n";
    o << "domain_lo = " << fmt(prof.domain.lo) << "\n";
    o << "domain_hi = " << fmt(prof.domain.hi) << "\n";
    o << "root_residual = " << fmt(prof.root_residual, "%.3e") << "\n";
    return o.str();
}

McConfig mc_config(const RunConfig& cfg, std::uint64_t stream_offset = 0) {
    McConfig mc;
    mc.n_paths = cfg.sim.n_paths;
    mc.seed = cfg.sim.seed;
    mc.h = cfg.sim.h;
    mc.theta = cfg.sim.theta;
    mc.t_max = cfg.sim.t_max;
    mc.workers = cfg.workers;
    mc.blocks = cfg.sim.blocks;
    mc.stream_offset = stream_offset;
    return mc;
}

std::vector<double> default_alpha_grid(const Model& model, double w) {
    const double hi_dom = model.domain().hi;
    double hi = 1.25 * w;
    if (std::isfinite(hi_dom)) hi = std::min(hi, w + 0.6 * (hi_dom - w));
    std::vector<double> grid(11);
    for (int i = 0; i < 11; ++i) grid[static_cast<std::size_t>(i)] = hi * (i + 1) / 11.0;
    return grid;
}

std::vector<double> default_x_grid(const CramerProfile& prof) {
    const double x_star = 1.0 / prof.mu_star;
    const double lo = prof.x0;
    const double hi = 3.0 * x_star;
    std::vector<double> grid(200);
    for (int i = 1; i <= 200; ++i)
        grid[static_cast<std::size_t>(i - 1)] = lo + (hi - lo) * i / 200.0;
    return grid;
}

std::string csv_ruin_curve(const RuinCurve& curve) {
    std::ostringstream o;
    o << "z,psi_hat,ci_lo,ci_hi,n_paths,n_ruined,censored_frac,underflow_frac\n";
    for (const auto& pt : curve.points) {
        o << fmt(pt.z) << "," << fmt(pt.psi_hat, "%.10g") << ","
          << fmt(pt.ci.lo, "%.10g") << "," << fmt(pt.ci.hi, "%.10g") << ","
          << pt.n_paths << "," << pt.n_ruined << ","
          << fmt(pt.censored_frac, "%.10g") << ","
          << fmt(pt.underflow_frac, "%.10g") << "\n";
    }
    return o.str();
}

std::string svg_ruin_loglog(const RuinCurve& curve, double w, bool have_fit,
                            const CramerFit& fit) {
    PlotSeries data;
    data.label = "ln psi_hat";
    data.points = true;
    for (const auto& pt : curve.points)
        if (pt.psi_hat > 0.0) {
            data.x.push_back(std::log(pt.z));
            data.y.push_back(std::log(pt.psi_hat));
        }
    PlotSpec spec;
    spec.title = "ruin probability, log-log";
    spec.x_label = "ln z";
    spec.y_label = "ln psi";
    if (!data.x.empty()) {
        PlotSeries ref;
        ref.color = "#888888";
        ref.label = "slope -w";
        ref.x = {data.x.front(), data.x.back()};
        ref.y = {data.y.front(),
                 data.y.front() - w * (data.x.back() - data.x.front())};
        spec.series.push_back(ref);
        if (have_fit) {
            PlotSeries fl;
            fl.color = "#c0392b";
            fl.label = "weighted fit";
            fl.x = ref.x;
            fl.y = {fit.intercept + fit.slope * ref.x[0],
                    fit.intercept + fit.slope * ref.x[1]};
            spec.series.push_back(fl);
        }
    }
    spec.series.push_back(data);
    return render_line_chart(spec);
}

std::string svg_plateau(const RuinCurve& curve, double w) {
    PlotSeries s;
    s.label = "z^w psi_hat";
    s.points = true;
    for (const auto& pt : curve.points)
        if (pt.psi_hat > 0.0) {
            s.x.push_back(pt.z);
            s.y.push_back(std::pow(pt.z, w) * pt.psi_hat);
        }
    PlotSpec spec;
    spec.title = "Cramer plateau";
    spec.x_label = "z";
    spec.y_label = "z^w psi_hat";
    spec.series.push_back(s);
    return render_line_chart(spec);
}

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------------------
// commands

int cmd_analyze(const Model& model, const RunConfig& cfg, OutputWriter& out,
                const std::string& started) {
    const ConditionReport rep = check_conditions(model);
    out.write("conditions.txt", render_conditions(rep));
    if (rep.cond_b.verdict != Verdict::Verified) {
        out.finalize(cfg, "analyze", started, condition_summary(rep));
        std::cerr << "analyze: " << rep.cond_b.reason << "\n";
        return kExitNumerical;
    }
    const CramerProfile prof = lundberg_and_profile(model);
    out.write("profile.txt", render_profile(model, prof));

    const std::vector<double> xs = cfg.analysis.x_grid.empty()
                                       ? default_x_grid(prof)
                                       : cfg.analysis.x_grid;
    std::ostringstream rc;
    rc << "x,R\n";
    PlotSeries rseries;
    rseries.label = "R(x)";
    for (double x : xs) {
        if (x <= prof.x0) continue;
        const double r = rate_function(prof, model, x);
        rc << fmt(x) << "," << fmt(r) << "\n";
        rseries.x.push_back(x);
        rseries.y.push_back(r);
    }
    out.write("rate_function.csv", rc.str());

    const std::vector<double> alphas = cfg.analysis.alpha_grid.empty()
                                           ? default_alpha_grid(model, prof.w)
                                           : cfg.analysis.alpha_grid;
    McConfig mc = mc_config(cfg);
    mc.n_paths = cfg.analysis.laplace_n;
    const auto check = empirical_laplace_check(model, alphas, mc);
    std::ostringstream lc;
    lc << "alpha,mc_log,closed_form,z_score,rel_se,max_share,stable\n";
    for (const auto& pt : check)
        lc << fmt(pt.alpha) << "," << fmt(pt.mc_log, "%.10g") << ","
           << fmt(pt.closed_form, "%.10g") << "," << fmt(pt.z_score, "%.4g")
           << "," << fmt(pt.rel_se, "%.4g") << "," << fmt(pt.max_share, "%.4g")
           << "," << (pt.stable ? "true" : "false") << "\n";
    out.write("laplace_check.csv", lc.str());

    if (cfg.output.plots) {
        PlotSpec spec;
        spec.title = "rate function";
        spec.x_label = "x";
        spec.y_label = "R(x)";
        spec.h_lines = {prof.w};
        spec.series.push_back(rseries);
        out.write("rate_function.svg", render_line_chart(spec));
    }
    out.finalize(cfg, "analyze", started, condition_summary(rep));
    return kExitOk;
}

int cmd_simulate(const Model& model, const RunConfig& cfg, OutputWriter& out,
                 const std::string& started) {
    const PathBundle path = simulate_path(model, cfg.sim.horizon, cfg.sim.h,
                                          cfg.sim.seed, cfg.sim.path_id);
    std::ostringstream o;
    o << "t,xi,eta,Z,runmin_Z";
    GouPath gp;
    if (cfg.sim.has_v0) {
        gp = gou_path(path, cfg.sim.v0);
        o << ",V";
    }
    o << "\n";
    for (std::size_t k = 0; k < path.t.size(); ++k) {
        o << fmt(path.t[k], "%.17g") << "," << fmt(path.xi[k], "%.17g") << ","
          << fmt(path.eta[k], "%.17g") << "," << fmt(path.z[k], "%.17g") << ","
          << fmt(path.runmin_z[k], "%.17g");
        if (cfg.sim.has_v0) o << "," << fmt(gp.v[k], "%.17g");
        o << "\n";
    }
    out.write("path.csv", o.str());
    out.finalize(cfg, "simulate", started, "");
    return kExitOk;
}

int gate_conditions(const Model& model, bool force, ConditionReport& rep) {
    rep = check_conditions(model);
    if (rep.all_verified() || force) return kExitOk;
    std::cerr << "condition gate: " << condition_summary(rep) << "\n";
    if (rep.cond_a.verdict != Verdict::Verified)
        std::cerr << "  A: " << rep.cond_a.reason << "\n";
    if (rep.cond_b.verdict != Verdict::Verified)
        std::cerr << "  B: " << rep.cond_b.reason << "\n";
    if (rep.cond_c.verdict != Verdict::Verified)
        std::cerr << "  C: " << rep.cond_c.reason << "\n";
    std::cerr << "pass --force to run anyway\n";
    return kExitConditionGate;
}

int cmd_ruin(const Model& model, const RunConfig& cfg, bool force,
             OutputWriter& out, const std::string& started) {
    ConditionReport rep;
    if (int rc = gate_conditions(model, force, rep)) return rc;
    if (cfg.analysis.z_grid.empty())
        throw ConfigError(ErrorCode::MissingKey, "[analysis] z_grid is required");
    // the estimator itself does not need the Lundberg coefficient; only the
    // reference plots do, so a failed root search degrades the output
    double w = 0.0;
    bool have_w = false;
    try {
        w = lundberg_and_profile(model).w;
        have_w = true;
    } catch (const NumericError&) {
    }
    const RuinCurve curve =
        estimate_ruin_curve(model, cfg.analysis.z_grid, mc_config(cfg));
    out.write("ruin_curve.csv", csv_ruin_curve(curve));
    if (cfg.output.plots && have_w) {
        CramerFit fit;
        bool have_fit = false;
        try {
            fit = fit_cramer_asymptotics(curve, w);
            have_fit = true;
        } catch (const NumericError&) {
        }
        try {
            out.write("ruin_curve.svg", svg_ruin_loglog(curve, w, have_fit, fit));
            out.write("plateau.svg", svg_plateau(curve, w));
        } catch (const Error&) {
            // all-zero curve has nothing to plot
        }
    }
    if (cfg.output.dump_paths) {
        const PathBundle path = simulate_path(model, cfg.sim.horizon, cfg.sim.h,
                                              cfg.sim.seed, cfg.sim.path_id);
        std::ostringstream o;
        o << "t,xi,eta,Z,runmin_Z\n";
        for (std::size_t k = 0; k < path.t.size(); ++k)
            o << fmt(path.t[k], "%.17g") << "," << fmt(path.xi[k], "%.17g")
              << "," << fmt(path.eta[k], "%.17g") << ","
              << fmt(path.z[k], "%.17g") << ","
              << fmt(path.runmin_z[k], "%.17g") << "\n";
        out.write("path.csv", o.str());
    }
    out.finalize(cfg, "ruin", started, condition_summary(rep));
    return kExitOk;
}

int cmd_ldp(const Model& model, const RunConfig& cfg, bool force,
            OutputWriter& out, const std::string& started) {
    ConditionReport rep;
    if (int rc = gate_conditions(model, force, rep)) return rc;
    double z = cfg.analysis.ldp_z;
    if (z == 0.0) {
        if (cfg.analysis.z_grid.empty())
            throw ConfigError(ErrorCode::MissingKey,
                              "[analysis] needs ldp_z or a z_grid");
        z = cfg.analysis.z_grid.back();
    }
    const std::vector<double> xs = cfg.analysis.x_grid.empty()
                                       ? std::vector<double>{0.5, 0.75, 1.0, 1.5, 2.0}
                                       : cfg.analysis.x_grid;
    const RuinTimeCdf cdf = estimate_ruin_time_cdf(model, z, xs, mc_config(cfg));
    std::ostringstream o;
    o << "# z = " << fmt(z) << "\n";
    o << "# n_paths = " << cdf.n_paths << "\n";
    o << "# psi_hat = " << fmt(cdf.psi_hat, "%.10g") << "\n";
    o << "# psi_normalized_rate = " << fmt(cdf.psi_normalized_rate, "%.10g") << "\n";
    o << "x,threshold_t,p_hat,ci_lo,ci_hi,count,normalized_rate\n";
    for (const auto& pt : cdf.points)
        o << fmt(pt.x) << "," << fmt(pt.threshold, "%.10g") << ","
          << fmt(pt.p_hat, "%.10g") << "," << fmt(pt.ci.lo, "%.10g") << ","
          << fmt(pt.ci.hi, "%.10g") << "," << pt.count << ","
          << fmt(pt.normalized_rate, "%.10g") << "\n";
    out.write("ldp_curve.csv", o.str());
    if (cfg.output.plots) {
        PlotSeries s;
        s.label = "-ln P(T_z <= x ln z) / ln z";
        s.points = true;
        for (const auto& pt : cdf.points)
            if (std::isfinite(pt.normalized_rate)) {
                s.x.push_back(pt.x);
                s.y.push_back(pt.normalized_rate);
            }
        PlotSpec spec;
        spec.title = "finite-time ruin exponents";
        spec.x_label = "x";
        spec.y_label = "normalized rate";
        if (std::isfinite(cdf.psi_normalized_rate))
            spec.h_lines = {cdf.psi_normalized_rate};
        spec.series.push_back(s);
        try {
            out.write("ldp_rates.svg", render_line_chart(spec));
        } catch (const Error&) {
        }
    }
    out.finalize(cfg, "ldp", started, condition_summary(rep));
    return kExitOk;
}

std::string render_constant(const CramerConstantEstimate& est) {
    std::ostringstream o;
    o << "c_minus = " << fmt(est.value, "%.10g") << "\n";
    o << "ci_lo = " << fmt(est.ci.lo, "%.10g") << "\n";
    o << "ci_hi = " << fmt(est.ci.hi, "%.10g") << "\n";
    o << "w = " << fmt(est.w) << "\n";
    o << "mu_star = " << fmt(est.mu_star) << "\n";
    o << "blocks = " << est.blocks << "\n";
    o << "n_samples = " << est.n_samples << "\n";
    o << "dispersion_flag = " << (est.dispersion_flag ? "true" : "false") << "\n";
    return o.str();
}

int cmd_constant(const Model& model, const RunConfig& cfg, bool force,
                 OutputWriter& out, const std::string& started) {
    ConditionReport rep;
    if (int rc = gate_conditions(model, force, rep)) return rc;
    const CramerProfile prof = lundberg_and_profile(model);
    McConfig mc = mc_config(cfg, /*stream_offset=*/1ull << 32);
    const CramerConstantEstimate est = estimate_cramer_constant(model, prof, mc);
    out.write("constant.txt", render_constant(est));
    out.finalize(cfg, "constant", started, condition_summary(rep));
    return kExitOk;
}

int cmd_verify(const Model& model, const RunConfig& cfg, bool force,
               OutputWriter& out, const std::string& started) {
    ConditionReport rep;
    if (int rc = gate_conditions(model, force, rep)) return rc;
    if (cfg.analysis.z_grid.empty())
        throw ConfigError(ErrorCode::MissingKey, "[analysis] z_grid is required");
    const CramerProfile prof = lundberg_and_profile(model);
    const double w = prof.w;

    const RuinCurve curve =
        estimate_ruin_curve(model, cfg.analysis.z_grid, mc_config(cfg));
    out.write("ruin_curve.csv", csv_ruin_curve(curve));

    const CramerFit fit = fit_cramer_asymptotics(curve, w);

    McConfig cmc = mc_config(cfg, /*stream_offset=*/1ull << 32);
    cmc.n_paths = std::min<std::uint64_t>(cfg.sim.n_paths, 100000);
    const CramerConstantEstimate est = estimate_cramer_constant(model, prof, cmc);

    // plateau over the top half of the usable grid, with an interval from
    // the per-point Wilson bounds
    std::vector<double> plat_top, plat_lo, plat_hi;
    {
        std::vector<const RuinPoint*> used;
        for (const auto& pt : curve.points)
            if (pt.n_ruined >= 10) used.push_back(&pt);
        const std::size_t half = used.size() / 2;
        for (std::size_t i = half; i < used.size(); ++i) {
            const auto& pt = *used[i];
            const double zw = std::pow(pt.z, w);
            plat_top.push_back(zw * pt.psi_hat);
            plat_lo.push_back(zw * pt.ci.lo);
            plat_hi.push_back(zw * pt.ci.hi);
        }
    }

    std::vector<VerifyCheck> checks;
    {
        VerifyCheck c;
        c.name = "slope_within_tol";
        const double rel = std::fabs(fit.slope + w) / w;
        c.pass = rel <= cfg.verify.slope_rel_tol;
        c.detail = "slope=" + fmt(fit.slope, "%.6g") + " target=" + fmt(-w, "%.6g") +
                   " rel_err=" + fmt(rel, "%.3g") +
                   " tol=" + fmt(cfg.verify.slope_rel_tol, "%.3g");
        checks.push_back(c);
    }
    {
        VerifyCheck c;
        c.name = "slope_ci_covers_minus_w";
        const double zq = 1.959963984540054;
        const double lo = fit.slope - zq * fit.slope_se;
        const double hi = fit.slope + zq * fit.slope_se;
        c.pass = lo <= -w && -w <= hi;
        c.detail = "ci=[" + fmt(lo, "%.6g") + ", " + fmt(hi, "%.6g") + "]";
        checks.push_back(c);
    }
    {
        VerifyCheck c;
        c.name = "plateau_ratio";
        const std::size_t n = plat_top.size();
        if (n >= 2) {
            const std::size_t take = std::min<std::size_t>(3, n);
            double mx = 0.0, mn = std::numeric_limits<double>::infinity();
            for (std::size_t i = n - take; i < n; ++i) {
                mx = std::max(mx, plat_top[i]);
                mn = std::min(mn, plat_top[i]);
            }
            const double ratio = mn > 0.0 ? mx / mn : std::numeric_limits<double>::infinity();
            c.pass = ratio <= cfg.verify.plateau_ratio_max;
            c.detail = "ratio=" + fmt(ratio, "%.4g") +
                       " max=" + fmt(cfg.verify.plateau_ratio_max, "%.3g");
        } else {
            c.pass = false;
            c.detail = "fewer than 2 usable plateau points";
        }
        checks.push_back(c);
    }
    {
        VerifyCheck c;
        c.name = "constant_vs_plateau";
        if (!plat_top.empty() && est.value > 0.0) {
            const double pm = mean(plat_top);
            const double factor = est.value > pm ? est.value / pm : pm / est.value;
            const bool overlap = est.ci.hi >= mean(plat_lo) && mean(plat_hi) >= est.ci.lo;
            c.pass = factor <= cfg.verify.constant_factor && overlap;
            c.detail = "c_minus=" + fmt(est.value, "%.6g") + " plateau_mean=" +
                       fmt(pm, "%.6g") + " factor=" + fmt(factor, "%.4g") +
                       " overlap=" + (overlap ? std::string("yes") : std::string("no"));
        } else {
            c.pass = false;
            c.detail = "constant or plateau unavailable";
        }
        checks.push_back(c);
    }

    std::ostringstream fitfile;
    fitfile << "slope = " << fmt(fit.slope, "%.10g") << "\n";
    fitfile << "slope_se = " << fmt(fit.slope_se, "%.10g") << "\n";
    fitfile << "intercept = " << fmt(fit.intercept, "%.10g") << "\n";
    fitfile << "w = " << fmt(w) << "\n";
    fitfile << "mu_star = " << fmt(prof.mu_star) << "\n";
    fitfile << "plateau_z =";
    for (double z : fit.z_used) fitfile << " " << fmt(z);
    fitfile << "\nplateau =";
    for (double p : fit.plateau) fitfile << " " << fmt(p, "%.10g");
    fitfile << "\nc_minus = " << fmt(est.value, "%.10g") << "\n";
    fitfile << "c_minus_ci_lo = " << fmt(est.ci.lo, "%.10g") << "\n";
    fitfile << "c_minus_ci_hi = " << fmt(est.ci.hi, "%.10g") << "\n";
    fitfile << "c_minus_dispersion_flag = "
            << (est.dispersion_flag ? "true" : "false") << "\n";
    out.write("cramer_fit.txt", fitfile.str());
    out.write("constant.txt", render_constant(est));

    bool all = true;
    std::ostringstream report;
    for (const auto& c : checks) {
        report << "check " << c.name << ": " << (c.pass ? "PASS" : "FAIL") << " ("
               << c.detail << ")\n";
        if (!c.pass) all = false;
    }
    report << "result: " << (all ? "PASS" : "FAIL") << "\n";
    out.write("verify_report.txt", report.str());
    std::cout << report.str();

    if (cfg.output.plots) {
        out.write("ruin_curve.svg", svg_ruin_loglog(curve, w, true, fit));
        try {
            out.write("plateau.svg", svg_plateau(curve, w));
        } catch (const Error&) {
        }
    }
    out.finalize(cfg, "verify", started, condition_summary(rep));
    return all ? kExitOk : kExitNumerical;
}

} // namespace

int run_command(const std::string& command, const RunConfig& cfg, bool force,
                const std::string& out_override) {
    const std::string started = iso_now();
    try {
        const Model model = make_model(cfg, force);
        OutputWriter out(out_override.empty() ? cfg.output.dir : out_override);
        if (command == "analyze") return cmd_analyze(model, cfg, out, started);
        if (command == "simulate") return cmd_simulate(model, cfg, out, started);
        if (command == "ruin") return cmd_ruin(model, cfg, force, out, started);
        if (command == "ldp") return cmd_ldp(model, cfg, force, out, started);
        if (command == "constant") return cmd_constant(model, cfg, force, out, started);
        if (command == "verify") return cmd_verify(model, cfg, force, out, started);
        std::cerr << "unknown command: " << command << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return e.code() == ErrorCode::ConditionAViolation ? kExitConditionGate
                                                          : kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace gou
