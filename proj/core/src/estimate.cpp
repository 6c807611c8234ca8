#include "gou/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "gou/simulate.hpp"

namespace gou {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kChunk = 1024;

int effective_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace

void parallel_chunks(std::uint64_t n, std::uint64_t chunk, int workers,
                     const std::function<void(std::size_t, std::uint64_t,
                                              std::uint64_t)>& fn) {
    if (n == 0) return;
    const std::uint64_t n_chunks = (n + chunk - 1) / chunk;
    const int nw = std::min<std::uint64_t>(effective_workers(workers), n_chunks);
    if (nw <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c)
            fn(static_cast<std::size_t>(c), c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) return;
            fn(static_cast<std::size_t>(c), c * chunk, std::min(n, (c + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

RuinCounts run_ruin_paths(const Model& model, const std::vector<double>& z_grid,
                          const std::vector<std::vector<double>>& thresholds,
                          const McConfig& cfg) {
    if (cfg.n_paths == 0)
        throw NumericError(ErrorCode::ZeroPaths, "no paths requested");
    if (z_grid.empty() || !std::is_sorted(z_grid.begin(), z_grid.end()))
        throw std::invalid_argument("z grid must be nonempty and ascending");
    if (!thresholds.empty() && thresholds.size() != z_grid.size())
        throw std::invalid_argument("one threshold vector per z required");

    const std::size_t nz = z_grid.size();
    struct ChunkAcc {
        std::vector<std::uint64_t> ruined, censored;
        std::vector<std::vector<std::uint64_t>> below;
        std::uint64_t underflow = 0;
    };
    const std::uint64_t n_chunks = (cfg.n_paths + kChunk - 1) / kChunk;
    std::vector<ChunkAcc> acc(static_cast<std::size_t>(n_chunks));

    parallel_chunks(cfg.n_paths, kChunk, cfg.workers,
                    [&](std::size_t ci, std::uint64_t begin, std::uint64_t end) {
        ChunkAcc& a = acc[ci];
        a.ruined.assign(nz, 0);
        a.censored.assign(nz, 0);
        if (!thresholds.empty()) {
            a.below.resize(nz);
            for (std::size_t zi = 0; zi < nz; ++zi)
                a.below[zi].assign(thresholds[zi].size(), 0);
        }
        for (std::uint64_t p = begin; p < end; ++p) {
            PathStepper st(model, cfg.h,
                           RandomStream(cfg.seed, cfg.stream_offset + p));
            std::size_t zi = 0;  // next z level not yet ruined
            while (zi < nz && st.xi() < cfg.theta && st.step(cfg.t_max)) {
                const double zval = st.z();
                while (zi < nz && zval < -z_grid[zi]) {
                    ++a.ruined[zi];
                    if (!thresholds.empty()) {
                        const auto& th = thresholds[zi];
                        for (std::size_t xi = 0; xi < th.size(); ++xi)
                            if (st.t() <= th[xi]) ++a.below[zi][xi];
                    }
                    ++zi;
                }
            }
            if (zi < nz && st.t() >= cfg.t_max)
                for (std::size_t rest = zi; rest < nz; ++rest)
                    ++a.censored[rest];
            if (st.underflow()) ++a.underflow;
        }
    });

    RuinCounts out;
    out.n_paths = cfg.n_paths;
    out.ruined.assign(nz, 0);
    out.censored_tmax.assign(nz, 0);
    if (!thresholds.empty()) {
        out.below_threshold.resize(nz);
        for (std::size_t zi = 0; zi < nz; ++zi)
            out.below_threshold[zi].assign(thresholds[zi].size(), 0);
    }
    for (const auto& a : acc) {
        for (std::size_t zi = 0; zi < nz; ++zi) {
            out.ruined[zi] += a.ruined[zi];
            out.censored_tmax[zi] += a.censored[zi];
            if (!thresholds.empty())
                for (std::size_t xi = 0; xi < a.below[zi].size(); ++xi)
                    out.below_threshold[zi][xi] += a.below[zi][xi];
        }
        out.underflow += a.underflow;
    }
    return out;
}

RuinCurve estimate_ruin_curve(const Model& model,
                              const std::vector<double>& z_grid,
                              const McConfig& cfg) {
    const RuinCounts counts = run_ruin_paths(model, z_grid, {}, cfg);
    RuinCurve curve;
    curve.horizon = cfg.t_max;
    curve.theta = cfg.theta;
    curve.points.resize(z_grid.size());
    const double n = static_cast<double>(cfg.n_paths);
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        RuinPoint& pt = curve.points[i];
        pt.z = z_grid[i];
        pt.n_paths = cfg.n_paths;
        pt.n_ruined = counts.ruined[i];
        pt.psi_hat = static_cast<double>(counts.ruined[i]) / n;
        pt.ci = wilson_interval(counts.ruined[i], cfg.n_paths);
        pt.censored_frac = static_cast<double>(counts.censored_tmax[i]) / n;
        pt.underflow_frac = static_cast<double>(counts.underflow) / n;
    }
    return curve;
}

RuinTimeCdf estimate_ruin_time_cdf(const Model& model, double z,
                                   const std::vector<double>& x_grid,
                                   const McConfig& cfg) {
    if (x_grid.empty() || !std::is_sorted(x_grid.begin(), x_grid.end()))
        throw std::invalid_argument("x grid must be nonempty and ascending");
    const double lz = std::log(z);
    std::vector<double> th(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) th[i] = x_grid[i] * lz;
    const RuinCounts counts = run_ruin_paths(model, {z}, {th}, cfg);

    RuinTimeCdf out;
    out.z = z;
    out.n_paths = cfg.n_paths;
    const double n = static_cast<double>(cfg.n_paths);
    out.psi_hat = static_cast<double>(counts.ruined[0]) / n;
    out.psi_normalized_rate =
        out.psi_hat > 0.0 ? -std::log(out.psi_hat) / lz : kInf;
    out.points.resize(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        RuinTimePoint& pt = out.points[i];
        pt.x = x_grid[i];
        pt.threshold = th[i];
        pt.count = counts.below_threshold[0][i];
        pt.p_hat = static_cast<double>(pt.count) / n;
        pt.ci = wilson_interval(pt.count, cfg.n_paths);
        pt.normalized_rate = pt.p_hat > 0.0 ? -std::log(pt.p_hat) / lz : kInf;
    }
    return out;
}

CramerConstantEstimate estimate_cramer_constant(const Model& model,
                                                const CramerProfile& profile,
                                                const McConfig& cfg) {
    if (cfg.n_paths == 0)
        throw NumericError(ErrorCode::ZeroPaths, "no paths requested");
    const std::uint64_t n = cfg.n_paths;
    const double w = profile.w;

    // Phase 1: (M, Q, Lbar) from unit-interval paths.
    std::vector<double> ms(n), qs(n), lbars(n);
    parallel_chunks(n, kChunk, cfg.workers,
                    [&](std::size_t, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t p = begin; p < end; ++p) {
            PathStepper st(model, cfg.h,
                           RandomStream(cfg.seed, cfg.stream_offset + p));
            double zmin = 0.0;
            while (st.step(1.0)) zmin = std::min(zmin, st.z());
            ms[p] = std::exp(-st.xi());
            qs[p] = st.z();
            lbars[p] = -std::exp(st.xi()) * (st.z() - zmin);
        }
    });

    // Phase 2: independent copies of inf_{t>0} Z_t from long-horizon paths.
    std::vector<double> infs(n);
    parallel_chunks(n, kChunk, cfg.workers,
                    [&](std::size_t, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t p = begin; p < end; ++p) {
            PathStepper st(model, cfg.h,
                           RandomStream(cfg.seed, cfg.stream_offset + n + p));
            double zmin = 0.0;
            while (st.xi() < cfg.theta && st.step(cfg.t_max))
                zmin = std::min(zmin, st.z());
            infs[p] = zmin;
        }
    });

    // The same inf sample must enter both power terms: their difference is
    // what keeps the w-th moment finite.
    const int nb = std::max(1, cfg.blocks);
    std::vector<double> block_sum(static_cast<std::size_t>(nb), 0.0);
    std::vector<std::uint64_t> block_n(static_cast<std::size_t>(nb), 0);
    auto neg_part = [](double v) { return v < 0.0 ? -v : 0.0; };
    for (std::uint64_t i = 0; i < n; ++i) {
        const double inner = qs[i] + ms[i] * std::min(lbars[i], infs[i]);
        const double bracket =
            std::pow(neg_part(inner), w) - std::pow(ms[i] * neg_part(infs[i]), w);
        const std::size_t b = static_cast<std::size_t>(i % nb);
        block_sum[b] += bracket;
        ++block_n[b];
    }
    std::vector<double> block_means;
    block_means.reserve(block_sum.size());
    for (std::size_t b = 0; b < block_sum.size(); ++b)
        if (block_n[b] > 0)
            block_means.push_back(block_sum[b] / static_cast<double>(block_n[b]));

    const double scale = 1.0 / (w * profile.mu_star);
    const double med = median(block_means);
    double se = 0.0;
    if (block_means.size() > 1) {
        // 1.2533 = sqrt(pi/2): efficiency factor of the median of
        // (approximately normal) block means
        se = 1.2533 * std::sqrt(sample_variance(block_means) /
                                static_cast<double>(block_means.size()));
    }
    CramerConstantEstimate est;
    est.value = scale * med;
    est.ci = {scale * (med - 1.959963984540054 * se),
              scale * (med + 1.959963984540054 * se)};
    est.w = w;
    est.mu_star = profile.mu_star;
    est.blocks = static_cast<int>(block_means.size());
    est.n_samples = n;
    est.dispersion_flag = !(std::fabs(med) > 0.0) || (se > std::fabs(med));
    return est;
}

CramerFit fit_cramer_asymptotics(const RuinCurve& curve, double w) {
    std::vector<double> x, y, wt, zs, plateau;
    for (const auto& pt : curve.points) {
        if (pt.n_ruined < 10) continue;
        const double p = pt.psi_hat;
        x.push_back(std::log(pt.z));
        y.push_back(std::log(p));
        // delta method: Var(ln p_hat) ~ (1-p) / (n p)
        wt.push_back(static_cast<double>(pt.n_paths) * p / (1.0 - p));
        zs.push_back(pt.z);
        plateau.push_back(std::pow(pt.z, w) * p);
    }
    if (x.size() < 4)
        throw NumericError(ErrorCode::InsufficientRuins,
                           "fit_cramer_asymptotics: need at least 4 grid points "
                           "with 10+ ruins");
    const WlsFit fit = weighted_least_squares(x, y, wt);
    CramerFit out;
    out.slope = fit.slope;
    out.slope_se = fit.slope_se;
    out.intercept = fit.intercept;
    out.z_used = std::move(zs);
    out.plateau = std::move(plateau);
    out.w = w;
    return out;
}

std::vector<LaplaceCheckPoint> empirical_laplace_check(
    const Model& model, const std::vector<double>& alpha_grid,
    const McConfig& cfg) {
    if (cfg.n_paths == 0)
        throw NumericError(ErrorCode::ZeroPaths, "no paths requested");
    for (double a : alpha_grid)
        if (a != 0.0 && !model.domain().contains(a)) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "alpha=%g outside the exponent domain (%g, %g)", a,
                          model.domain().lo, model.domain().hi);
            throw NumericError(ErrorCode::OutOfDomain, buf);
        }

    const std::size_t na = alpha_grid.size();
    struct ChunkAcc {
        std::vector<double> sum, sumsq, maxterm;
    };
    const std::uint64_t n_chunks = (cfg.n_paths + kChunk - 1) / kChunk;
    std::vector<ChunkAcc> acc(static_cast<std::size_t>(n_chunks));
    parallel_chunks(cfg.n_paths, kChunk, cfg.workers,
                    [&](std::size_t ci, std::uint64_t begin, std::uint64_t end) {
        ChunkAcc& a = acc[ci];
        a.sum.assign(na, 0.0);
        a.sumsq.assign(na, 0.0);
        a.maxterm.assign(na, 0.0);
        for (std::uint64_t p = begin; p < end; ++p) {
            RandomStream rng(cfg.seed, cfg.stream_offset + p);
            const Increment inc = model.sample_increment(1.0, rng);
            for (std::size_t i = 0; i < na; ++i) {
                const double term = std::exp(-alpha_grid[i] * inc.dxi);
                a.sum[i] += term;
                a.sumsq[i] += term * term;
                a.maxterm[i] = std::max(a.maxterm[i], term);
            }
        }
    });

    std::vector<double> sum(na, 0.0), sumsq(na, 0.0), maxterm(na, 0.0);
    for (const auto& a : acc)
        for (std::size_t i = 0; i < na; ++i) {
            sum[i] += a.sum[i];
            sumsq[i] += a.sumsq[i];
            maxterm[i] = std::max(maxterm[i], a.maxterm[i]);
        }

    const double n = static_cast<double>(cfg.n_paths);
    std::vector<LaplaceCheckPoint> out(na);
    for (std::size_t i = 0; i < na; ++i) {
        LaplaceCheckPoint& pt = out[i];
        pt.alpha = alpha_grid[i];
        pt.closed_form = model.laplace_exponent(alpha_grid[i]);
        const double m = sum[i] / n;
        const double var = std::max(0.0, sumsq[i] / n - m * m);
        const double se_mean = std::sqrt(var / n);
        pt.mc_log = std::log(m);
        pt.rel_se = m > 0.0 ? se_mean / m : kInf;
        pt.max_share = sum[i] > 0.0 ? maxterm[i] / sum[i] : 1.0;
        // ln of the mean: delta method SE = se_mean / m
        pt.z_score = pt.rel_se > 0.0
                         ? (pt.mc_log - pt.closed_form) / pt.rel_se
                         : 0.0;
        pt.stable = std::isfinite(m) && pt.max_share <= 0.1 && pt.rel_se <= 0.2;
    }
    return out;
}

} // namespace gou
