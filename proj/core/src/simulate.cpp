#include "gou/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gou/stats.hpp"

namespace gou {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (1 - e^{-g d}) / g, the exact integral of e^{-g s} over [0, d].
inline double drift_integral(double g, double d) {
    if (g == 0.0) return d;
    return -std::expm1(-g * d) / g;
}

} // namespace

PathStepper::PathStepper(const Model& model, double h, RandomStream rng)
    : model_(&model), variant_(model.variant()), h_(h), rng_(rng) {
    gxi_ = model.gamma_xi();
    geta_ = model.gamma_eta();
    model.cholesky(l11_, l21_, l22_);
    lambda_ = model.jump_intensity();
    next_jump_t_ = kInf;
    if (lambda_ > 0.0) next_jump_t_ = rng_.exponential() / lambda_;
    switch (variant_) {
        case ModelVariant::JumpDiffusion: {
            const auto& p = std::get<JumpDiffusionParams>(model.spec());
            sigma_ = std::sqrt(p.sigma2);
            jump_law_ = p.jump_law;
            jmean_ = p.jump_mean;
            jsd_ = std::sqrt(std::max(p.jump_var, 0.0));
            rho_ = p.rho;
            break;
        }
        case ModelVariant::VarianceGamma: {
            const auto& p = std::get<VarianceGammaParams>(model.spec());
            vg_c_ = p.c;
            vg_lambda_ = p.lambda;
            vg_mu_ = p.mu;
            break;
        }
        default:
            break;
    }
}

void PathStepper::advance_segment(double dt) {
    if (dt <= 0.0) return;
    if (xi_ > 700.0) underflow_ = true;
    const double disc = std::exp(-xi_);  // left-point integrand
    switch (variant_) {
        case ModelVariant::CpGaussian: {
            // piecewise linear between jumps: integrate Z in closed form
            z_ += geta_ * disc * drift_integral(gxi_, dt);
            xi_ += gxi_ * dt;
            eta_ += geta_ * dt;
            break;
        }
        case ModelVariant::BrownianDrift: {
            const double sq = std::sqrt(dt);
            const double g1 = rng_.normal();
            const double g2 = rng_.normal();
            const double dxi = gxi_ * dt + l11_ * sq * g1;
            const double deta = geta_ * dt + sq * (l21_ * g1 + l22_ * g2);
            z_ += disc * deta;
            xi_ += dxi;
            eta_ += deta;
            break;
        }
        case ModelVariant::JumpDiffusion: {
            const double db = sigma_ * std::sqrt(dt) * rng_.normal();
            const double dxi = gxi_ * dt + db;
            const double deta = geta_ * dt + db;
            z_ += disc * deta;
            xi_ += dxi;
            eta_ += deta;
            break;
        }
        case ModelVariant::VarianceGamma: {
            const double ds = rng_.gamma(vg_c_ * dt, vg_lambda_);
            const double db = ds > 0.0 ? std::sqrt(ds) * rng_.normal() : 0.0;
            const double dxi = gxi_ * dt + db + vg_mu_ * ds;
            const double deta = geta_ * dt + ds;
            z_ += disc * deta;
            xi_ += dxi;
            eta_ += deta;
            break;
        }
    }
}

void PathStepper::apply_jump() {
    if (xi_ > 700.0) underflow_ = true;
    const double disc = std::exp(-xi_);  // pre-jump left limit
    switch (variant_) {
        case ModelVariant::CpGaussian: {
            const auto& p = std::get<CpGaussianParams>(model_->spec());
            const double g1 = rng_.normal();
            const double g2 = rng_.normal();
            const double jx = p.mean_x + l11_ * g1;
            const double jy = p.mean_y + l21_ * g1 + l22_ * g2;
            z_ += disc * jy;
            xi_ += jx;
            eta_ += jy;
            break;
        }
        case ModelVariant::JumpDiffusion: {
            double jx;
            if (jump_law_ == JumpLaw::Gaussian) {
                jx = jmean_ + jsd_ * rng_.normal();
            } else {
                jx = rng_.exponential() / rho_;
                if (rng_.next_u64() & 1u) jx = -jx;
            }
            xi_ += jx;  // eta and Z carry no jump here
            break;
        }
        default:
            break;
    }
    next_jump_t_ = t_ + rng_.exponential() / lambda_;
}

bool PathStepper::step(double t_cap) {
    if (t_ >= t_cap) return false;
    const double mesh_t = static_cast<double>(next_mesh_k_) * h_;
    double target = std::min(mesh_t, t_cap);
    bool jump = false;
    if (next_jump_t_ <= target) {
        target = next_jump_t_;
        jump = true;
    }
    advance_segment(target - t_);
    t_ = target;
    if (jump) apply_jump();
    // a jump landing exactly on a mesh point yields one grid point, not two
    if (target == mesh_t) ++next_mesh_k_;
    last_was_jump_ = jump;
    return true;
}

PathBundle simulate_path(const Model& model, double horizon, double h,
                         std::uint64_t seed, std::uint64_t path_id,
                         std::uint64_t stream_offset) {
    if (!(h > 0.0) || !(horizon >= h))
        throw std::invalid_argument("simulate_path: need 0 < h <= horizon");
    PathBundle out;
    out.grid.horizon = horizon;
    out.grid.h = h;
    out.seed = seed;
    out.path_id = path_id;

    PathStepper st(model, h, RandomStream(seed, stream_offset + path_id));
    const std::size_t reserve =
        static_cast<std::size_t>(horizon / h) + 16;
    out.t.reserve(reserve);
    out.xi.reserve(reserve);
    out.eta.reserve(reserve);
    out.z.reserve(reserve);
    out.runmin_z.reserve(reserve);

    double runmin = 0.0;
    out.t.push_back(0.0);
    out.xi.push_back(0.0);
    out.eta.push_back(0.0);
    out.z.push_back(0.0);
    out.runmin_z.push_back(0.0);

    while (st.step(horizon)) {
        out.t.push_back(st.t());
        out.xi.push_back(st.xi());
        out.eta.push_back(st.eta());
        out.z.push_back(st.z());
        runmin = std::min(runmin, st.z());
        out.runmin_z.push_back(runmin);
        if (st.last_was_jump()) out.grid.jump_times.push_back(st.t());
    }
    out.underflow = st.underflow();
    return out;
}

GouPath gou_path(const PathBundle& path, double v0) {
    if (v0 < 0.0)
        throw NumericError(ErrorCode::NegativeInitialValue,
                           "gou_path: initial value must be nonnegative");
    GouPath out;
    out.v.resize(path.t.size());
    out.ruin.censored = true;
    out.ruin.time = path.grid.horizon;
    for (std::size_t k = 0; k < path.t.size(); ++k) {
        out.v[k] = std::exp(path.xi[k]) * (v0 + path.z[k]);
        if (out.ruin.censored && path.z[k] < -v0) {
            out.ruin.censored = false;
            out.ruin.time = path.t[k];
        }
    }
    return out;
}

DiscreteEmbedding discrete_embedding(const PathBundle& path) {
    const double horizon = path.grid.horizon;
    const double n_real = std::round(horizon);
    if (std::fabs(horizon - n_real) > 1e-12 || n_real < 1.0)
        throw NumericError(ErrorCode::NonIntegerHorizon,
                           "discrete_embedding: horizon must be a positive integer");
    const int n = static_cast<int>(n_real);

    // locate every integer time on the grid (exact match: the mesh must
    // contain the integers, which holds for dyadic h)
    std::vector<std::size_t> idx(static_cast<std::size_t>(n) + 1);
    std::size_t k = 0;
    for (int j = 0; j <= n; ++j) {
        const double target = static_cast<double>(j);
        while (k < path.t.size() && path.t[k] < target) ++k;
        if (k >= path.t.size() || path.t[k] != target)
            throw NumericError(ErrorCode::NonIntegerHorizon,
                               "discrete_embedding: grid misses an integer time "
                               "(use a step h that divides 1)");
        idx[static_cast<std::size_t>(j)] = k;
    }

    DiscreteEmbedding emb;
    emb.n = n;
    auto sz = static_cast<std::size_t>(n);
    emb.a.resize(sz);
    emb.b.resize(sz);
    emb.c.resize(sz);
    emb.d.resize(sz);
    emb.m.resize(sz);
    emb.q.resize(sz);
    emb.l_sup.resize(sz);
    emb.l_bar.resize(sz);
    emb.x_up.resize(sz);
    emb.x_hat.resize(sz);
    emb.grid_sup.resize(sz);
    emb.grid_inf.resize(sz);
    emb.z_at_int.resize(sz + 1);
    emb.xi_at_int.resize(sz + 1);

    emb.z_at_int[0] = path.z[idx[0]];
    emb.xi_at_int[0] = path.xi[idx[0]];

    double sum_up = 0.0, sum_hat = 0.0, prod_m = 1.0;
    for (int j = 1; j <= n; ++j) {
        const std::size_t i0 = idx[static_cast<std::size_t>(j - 1)];
        const std::size_t i1 = idx[static_cast<std::size_t>(j)];
        const double xi_prev = path.xi[i0];
        const double xi_cur = path.xi[i1];
        const double z_prev = path.z[i0];
        const double z_cur = path.z[i1];
        double hi = -kInf, lo = kInf;
        for (std::size_t i = i0 + 1; i <= i1; ++i) {
            hi = std::max(hi, path.z[i]);
            lo = std::min(lo, path.z[i]);
        }
        const std::size_t v = static_cast<std::size_t>(j - 1);
        const double dxi = xi_cur - xi_prev;
        emb.m[v] = std::exp(-dxi);
        emb.c[v] = 1.0 / emb.m[v];
        emb.d[v] = std::exp(xi_prev) * (z_cur - z_prev);
        emb.q[v] = emb.d[v];
        emb.a[v] = emb.c[v];
        emb.b[v] = emb.c[v] * emb.d[v];
        const double exi = std::exp(xi_cur);
        emb.l_sup[v] = exi * (hi - z_cur);
        emb.l_bar[v] = -exi * (z_cur - lo);
        emb.grid_sup[v] = hi;
        emb.grid_inf[v] = lo;

        emb.x_up[v] = sum_up + prod_m * emb.q[v] + prod_m * emb.m[v] * emb.l_sup[v];
        emb.x_hat[v] =
            sum_hat - prod_m * emb.q[v] - prod_m * emb.m[v] * emb.l_bar[v];
        sum_up += prod_m * emb.q[v];
        sum_hat -= prod_m * emb.q[v];
        prod_m *= emb.m[v];

        emb.z_at_int[static_cast<std::size_t>(j)] = z_cur;
        emb.xi_at_int[static_cast<std::size_t>(j)] = xi_cur;
    }
    return emb;
}

std::vector<double> reconstruct_z(const DiscreteEmbedding& emb) {
    std::vector<double> out(static_cast<std::size_t>(emb.n));
    double acc = 0.0, prod = 1.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        acc += prod * emb.d[i];   // prod = prod_{j<i} C_j^{-1}
        prod *= 1.0 / emb.c[i];
        out[i] = acc;
    }
    return out;
}

std::vector<double> reconstruct_v(const DiscreteEmbedding& emb, double v0) {
    const std::size_t n = static_cast<std::size_t>(emb.n);
    std::vector<double> out(n);
    for (std::size_t k = 1; k <= n; ++k) {
        double prod_all = 1.0;
        for (std::size_t j = 0; j < k; ++j) prod_all *= emb.a[j];
        double acc = v0 * prod_all;
        for (std::size_t i = 0; i < k; ++i) {
            double tail = 1.0;
            for (std::size_t j = i + 1; j < k; ++j) tail *= emb.a[j];
            acc += tail * emb.b[i];
        }
        out[k - 1] = acc;
    }
    return out;
}

IidReport iid_diagnostics(const std::vector<DiscreteEmbedding>& embeddings,
                          double significance) {
    if (embeddings.size() < 1000)
        throw NumericError(ErrorCode::InsufficientSamples,
                           "iid_diagnostics: need at least 1000 paths");
    const int n = embeddings.front().n;
    if (n < 2)
        throw NumericError(ErrorCode::InsufficientSamples,
                           "iid_diagnostics: need at least 2 unit intervals");

    // Compound Poisson intervals without jumps put a point mass on M and Q;
    // accumulated rounding displaces that atom by ~1e-15 between intervals,
    // which a raw KS statistic would read as a genuine discrepancy. Snap all
    // samples of a field to a lattice ~1e-9 of its scale so rounding dust
    // compares as ties (far below any statistical resolution at these sizes).
    auto quantized = [&](const std::vector<double> DiscreteEmbedding::*field) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& e : embeddings)
            for (const double v : e.*field) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        const double scale =
            std::max({hi - lo, std::fabs(lo), std::fabs(hi), 1e-300});
        const double res = 1e-9 * scale;
        std::vector<std::vector<double>> cols(
            static_cast<std::size_t>(embeddings.front().n));
        for (auto& c : cols) c.reserve(embeddings.size());
        for (const auto& e : embeddings) {
            const auto& v = e.*field;
            for (std::size_t i = 0; i < v.size(); ++i)
                cols[i].push_back(std::round(v[i] / res) * res);
        }
        return cols;
    };

    IidReport rep;
    const int mid = n / 2;
    const int last = n - 1;
    struct Probe {
        const char* name;
        const std::vector<double> DiscreteEmbedding::*field;
    };
    const Probe probes[] = {{"M", &DiscreteEmbedding::m},
                            {"Q", &DiscreteEmbedding::q},
                            {"Lbar", &DiscreteEmbedding::l_bar}};
    bool pass = true;
    for (const auto& pr : probes) {
        const auto cols = quantized(pr.field);
        for (int at : {mid, last}) {
            if (at == 0) continue;
            const auto ks =
                ks_two_sample(cols[0], cols[static_cast<std::size_t>(at)]);
            char label[32];
            std::snprintf(label, sizeof label, "%s_1 vs %s_%d", pr.name, pr.name,
                          at + 1);
            rep.ks.push_back({ks.statistic, ks.p_value});
            rep.ks_label.push_back(label);
            if (ks.p_value < significance) pass = false;
        }
    }

    // pooled lag-1 autocorrelations across n within each path
    auto pooled_autocorr = [&](const std::vector<std::vector<double>>& cols) {
        double mean = 0.0;
        std::size_t cnt = 0;
        double vlo = std::numeric_limits<double>::infinity(), vhi = -vlo;
        for (const auto& c : cols)
            for (const double v : c) {
                mean += v;
                ++cnt;
                vlo = std::min(vlo, v);
                vhi = std::max(vhi, v);
            }
        // constant field (degenerate law): correlation is undefined, report 0
        // rather than amplifying the rounding of the mean
        if (vlo == vhi)
            return std::pair<double, std::size_t>(0.0, cnt - cols.front().size());
        mean /= static_cast<double>(cnt);
        double num = 0.0, den = 0.0;
        std::size_t pairs = 0;
        const std::size_t paths = cols.front().size();
        for (std::size_t p = 0; p < paths; ++p) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                const double v = cols[i][p];
                den += (v - mean) * (v - mean);
                if (i + 1 < cols.size()) {
                    num += (v - mean) * (cols[i + 1][p] - mean);
                    ++pairs;
                }
            }
        }
        return std::pair<double, std::size_t>(den > 0.0 ? num / den : 0.0, pairs);
    };
    const auto [am, pairs_m] = pooled_autocorr(quantized(&DiscreteEmbedding::m));
    const auto [aq, pairs_q] = pooled_autocorr(quantized(&DiscreteEmbedding::q));
    rep.autocorr_m = am;
    rep.autocorr_q = aq;
    rep.autocorr_bound = 4.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(
                                  1, std::min(pairs_m, pairs_q))));
    if (std::fabs(am) > rep.autocorr_bound || std::fabs(aq) > rep.autocorr_bound)
        pass = false;
    rep.pass = pass;
    return rep;
}

} // namespace gou
