#include "gou/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gou {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) throw ValidationError(code, what);
}

void check_pos_def(double a, double b, double c, const char* label) {
    // [[a, b], [b, c]] positive definite
    require(a > 0.0 && c > 0.0 && a * c - b * b > 0.0, ErrorCode::NonPositiveDefinite,
            std::string(label) + " covariance matrix is not positive definite");
}

double laplace_mgf_gaussian(double alpha, double mean, double var) {
    // E e^{-alpha X} for X ~ N(mean, var)
    return std::exp(-mean * alpha + 0.5 * var * alpha * alpha);
}

} // namespace

const char* variant_name(ModelVariant v) {
    switch (v) {
        case ModelVariant::CpGaussian: return "cp_gaussian";
        case ModelVariant::BrownianDrift: return "brownian_drift";
        case ModelVariant::JumpDiffusion: return "jump_diffusion";
        case ModelVariant::VarianceGamma: return "variance_gamma";
    }
    return "?";
}

Model::Model(const ModelSpec& spec, bool validated)
    : spec_(spec), validated_(validated) {
    variant_ = static_cast<ModelVariant>(spec.index());
    prepare();
}

Model Model::validate(const ModelSpec& spec) {
    if (const auto* p = std::get_if<CpGaussianParams>(&spec)) {
        require(p->lambda > 0.0, ErrorCode::NonPositiveIntensity,
                "cp_gaussian: jump intensity lambda must be positive");
        check_pos_def(p->cov_xx, p->cov_xy, p->cov_yy, "cp_gaussian jump");
        require(p->gamma_xi + p->lambda * p->mean_x > 0.0, ErrorCode::DriftViolation,
                "cp_gaussian: gamma_xi + lambda*E[X] must be positive");
    } else if (const auto* p = std::get_if<BrownianDriftParams>(&spec)) {
        require(p->gamma_xi > 0.0, ErrorCode::DriftViolation,
                "brownian_drift: gamma_xi must be positive");
        check_pos_def(p->cov_xx, p->cov_xy, p->cov_yy, "brownian_drift");
    } else if (const auto* p = std::get_if<JumpDiffusionParams>(&spec)) {
        require(p->gamma_xi > 0.0, ErrorCode::DriftViolation,
                "jump_diffusion: gamma_xi must be positive");
        require(p->sigma2 > 0.0, ErrorCode::NonPositiveDefinite,
                "jump_diffusion: shared Brownian variance sigma2 must be positive");
        require(p->lambda > 0.0, ErrorCode::NonPositiveIntensity,
                "jump_diffusion: jump intensity lambda must be positive");
        if (p->jump_law == JumpLaw::Gaussian) {
            require(p->jump_var > 0.0, ErrorCode::NonPositiveDefinite,
                    "jump_diffusion: Gaussian jump variance must be positive");
            require(p->gamma_xi + p->lambda * p->jump_mean > 0.0, ErrorCode::DriftViolation,
                    "jump_diffusion: gamma_xi + lambda*E[X] must be positive");
        } else {
            require(p->rho > 0.0, ErrorCode::NonPositiveDefinite,
                    "jump_diffusion: Laplace parameter rho must be positive");
            // E[X] = 0 for Laplace jumps, so gamma_xi > 0 already covers the
            // drift condition.
        }
    } else if (const auto* p = std::get_if<VarianceGammaParams>(&spec)) {
        require(p->c > 0.0 && p->lambda > 0.0, ErrorCode::NonPositiveIntensity,
                "variance_gamma: subordinator parameters c and lambda must be positive");
        require(p->gamma_xi + p->c * p->mu / p->lambda > 0.0, ErrorCode::DriftViolation,
                "variance_gamma: gamma_xi + c*mu/lambda must be positive");
        require(p->gamma_eta <= 0.0, ErrorCode::ConditionAViolation,
                "variance_gamma: gamma_eta must be <= 0 (spectrally positive eta "
                "needs a nonpositive drift for ruin to stay possible)");
    }
    return Model(spec, true);
}

Model Model::unchecked(const ModelSpec& spec) { return Model(spec, false); }

void Model::prepare() {
    switch (variant_) {
        case ModelVariant::CpGaussian: {
            const auto& p = std::get<CpGaussianParams>(spec_);
            domain_ = {-kInf, kInf, false, false};
            l11_ = std::sqrt(std::max(p.cov_xx, 0.0));
            l21_ = l11_ > 0.0 ? p.cov_xy / l11_ : 0.0;
            l22_ = std::sqrt(std::max(p.cov_yy - l21_ * l21_, 0.0));
            break;
        }
        case ModelVariant::BrownianDrift: {
            const auto& p = std::get<BrownianDriftParams>(spec_);
            domain_ = {-kInf, kInf, false, false};
            l11_ = std::sqrt(std::max(p.cov_xx, 0.0));
            l21_ = l11_ > 0.0 ? p.cov_xy / l11_ : 0.0;
            l22_ = std::sqrt(std::max(p.cov_yy - l21_ * l21_, 0.0));
            break;
        }
        case ModelVariant::JumpDiffusion: {
            const auto& p = std::get<JumpDiffusionParams>(spec_);
            if (p.jump_law == JumpLaw::Laplace)
                domain_ = {-p.rho, p.rho, true, true};
            else
                domain_ = {-kInf, kInf, false, false};
            break;
        }
        case ModelVariant::VarianceGamma: {
            const auto& p = std::get<VarianceGammaParams>(spec_);
            const double half = std::sqrt(p.mu * p.mu + 2.0 * p.lambda);
            domain_ = {p.mu - half, p.mu + half, true, true};
            break;
        }
    }
}

double Model::laplace_exponent(double alpha) const {
    if (!domain_.contains(alpha)) return kInf;
    switch (variant_) {
        case ModelVariant::CpGaussian: {
            const auto& p = std::get<CpGaussianParams>(spec_);
            return -alpha * p.gamma_xi -
                   p.lambda * (1.0 - laplace_mgf_gaussian(alpha, p.mean_x, p.cov_xx));
        }
        case ModelVariant::BrownianDrift: {
            const auto& p = std::get<BrownianDriftParams>(spec_);
            return -alpha * p.gamma_xi + 0.5 * p.cov_xx * alpha * alpha;
        }
        case ModelVariant::JumpDiffusion: {
            const auto& p = std::get<JumpDiffusionParams>(spec_);
            double mgf;
            if (p.jump_law == JumpLaw::Gaussian) {
                mgf = laplace_mgf_gaussian(alpha, p.jump_mean, p.jump_var);
            } else {
                mgf = p.rho * p.rho / (p.rho * p.rho - alpha * alpha);
            }
            return -alpha * p.gamma_xi + 0.5 * p.sigma2 * alpha * alpha -
                   p.lambda * (1.0 - mgf);
        }
        case ModelVariant::VarianceGamma: {
            const auto& p = std::get<VarianceGammaParams>(spec_);
            const double g = 1.0 + alpha * p.mu / p.lambda -
                             alpha * alpha / (2.0 * p.lambda);
            if (!(g > 0.0)) return kInf;
            return -alpha * p.gamma_xi - p.c * std::log(g);
        }
    }
    return kInf;
}

LaplaceDerivatives Model::laplace_exponent_derivatives(double alpha) const {
    if (!domain_.contains(alpha)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "alpha=%g outside the exponent domain (%g, %g)", alpha,
                      domain_.lo, domain_.hi);
        throw NumericError(ErrorCode::OutOfDomain, buf);
    }
    switch (variant_) {
        case ModelVariant::CpGaussian: {
            const auto& p = std::get<CpGaussianParams>(spec_);
            const double m = laplace_mgf_gaussian(alpha, p.mean_x, p.cov_xx);
            const double gp = -p.mean_x + p.cov_xx * alpha;
            return {-p.gamma_xi + p.lambda * gp * m,
                    p.lambda * (p.cov_xx + gp * gp) * m};
        }
        case ModelVariant::BrownianDrift: {
            const auto& p = std::get<BrownianDriftParams>(spec_);
            return {-p.gamma_xi + p.cov_xx * alpha, p.cov_xx};
        }
        case ModelVariant::JumpDiffusion: {
            const auto& p = std::get<JumpDiffusionParams>(spec_);
            if (p.jump_law == JumpLaw::Gaussian) {
                const double m = laplace_mgf_gaussian(alpha, p.jump_mean, p.jump_var);
                const double gp = -p.jump_mean + p.jump_var * alpha;
                return {-p.gamma_xi + p.sigma2 * alpha + p.lambda * gp * m,
                        p.sigma2 + p.lambda * (p.jump_var + gp * gp) * m};
            }
            const double r2 = p.rho * p.rho;
            const double d = r2 - alpha * alpha;
            return {-p.gamma_xi + p.sigma2 * alpha + 2.0 * p.lambda * r2 * alpha / (d * d),
                    p.sigma2 + 2.0 * p.lambda * r2 * (r2 + 3.0 * alpha * alpha) / (d * d * d)};
        }
        case ModelVariant::VarianceGamma: {
            const auto& p = std::get<VarianceGammaParams>(spec_);
            const double g = 1.0 + alpha * p.mu / p.lambda -
                             alpha * alpha / (2.0 * p.lambda);
            const double gp = (p.mu - alpha) / p.lambda;
            return {-p.gamma_xi - p.c * gp / g,
                    p.c / (p.lambda * g) + p.c * (gp / g) * (gp / g)};
        }
    }
    return {};
}

Increment Model::sample_increment(double dt, RandomStream& rng) const {
    if (!(dt > 0.0))
        throw std::invalid_argument("sample_increment: dt must be positive");
    Increment inc;
    switch (variant_) {
        case ModelVariant::CpGaussian: {
            const auto& p = std::get<CpGaussianParams>(spec_);
            inc.dxi = p.gamma_xi * dt;
            inc.deta = p.gamma_eta * dt;
            if (p.lambda > 0.0) {
                double t = rng.exponential() / p.lambda;
                while (t <= dt) {
                    const double g1 = rng.normal();
                    const double g2 = rng.normal();
                    const double jx = p.mean_x + l11_ * g1;
                    const double jy = p.mean_y + l21_ * g1 + l22_ * g2;
                    inc.jumps.push_back({t, jx, jy});
                    inc.dxi += jx;
                    inc.deta += jy;
                    t += rng.exponential() / p.lambda;
                }
            }
            break;
        }
        case ModelVariant::BrownianDrift: {
            const auto& p = std::get<BrownianDriftParams>(spec_);
            const double sq = std::sqrt(dt);
            const double g1 = rng.normal();
            const double g2 = rng.normal();
            inc.dxi = p.gamma_xi * dt + l11_ * sq * g1;
            inc.deta = p.gamma_eta * dt + sq * (l21_ * g1 + l22_ * g2);
            break;
        }
        case ModelVariant::JumpDiffusion: {
            const auto& p = std::get<JumpDiffusionParams>(spec_);
            const double db = std::sqrt(p.sigma2 * dt) * rng.normal();
            inc.dxi = p.gamma_xi * dt + db;
            inc.deta = p.gamma_eta * dt + db;
            if (p.lambda > 0.0) {
                double t = rng.exponential() / p.lambda;
                while (t <= dt) {
                    double jx;
                    if (p.jump_law == JumpLaw::Gaussian) {
                        jx = p.jump_mean + std::sqrt(p.jump_var) * rng.normal();
                    } else {
                        jx = rng.exponential() / p.rho;
                        if (rng.next_u64() & 1u) jx = -jx;
                    }
                    inc.jumps.push_back({t, jx, 0.0});
                    inc.dxi += jx;
                    t += rng.exponential() / p.lambda;
                }
            }
            break;
        }
        case ModelVariant::VarianceGamma: {
            const auto& p = std::get<VarianceGammaParams>(spec_);
            const double ds = rng.gamma(p.c * dt, p.lambda);
            const double db = ds > 0.0 ? std::sqrt(ds) * rng.normal() : 0.0;
            inc.dxi = p.gamma_xi * dt + db + p.mu * ds;
            inc.deta = p.gamma_eta * dt + ds;
            break;
        }
    }
    return inc;
}

double Model::gamma_xi() const {
    return std::visit([](const auto& p) { return p.gamma_xi; }, spec_);
}

double Model::gamma_eta() const {
    return std::visit([](const auto& p) { return p.gamma_eta; }, spec_);
}

double Model::jump_intensity() const {
    switch (variant_) {
        case ModelVariant::CpGaussian:
            return std::get<CpGaussianParams>(spec_).lambda;
        case ModelVariant::JumpDiffusion:
            return std::get<JumpDiffusionParams>(spec_).lambda;
        default:
            return 0.0;
    }
}

double Model::mean_jump_xi() const {
    switch (variant_) {
        case ModelVariant::CpGaussian:
            return std::get<CpGaussianParams>(spec_).mean_x;
        case ModelVariant::JumpDiffusion: {
            const auto& p = std::get<JumpDiffusionParams>(spec_);
            return p.jump_law == JumpLaw::Gaussian ? p.jump_mean : 0.0;
        }
        default:
            return 0.0;
    }
}

void Model::cholesky(double& l11, double& l21, double& l22) const {
    l11 = l11_;
    l21 = l21_;
    l22 = l22_;
}

std::string Model::describe() const {
    char buf[256];
    switch (variant_) {
        case ModelVariant::CpGaussian: {
            const auto& p = std::get<CpGaussianParams>(spec_);
            std::snprintf(buf, sizeof buf,
                          "cp_gaussian(gamma_xi=%g, gamma_eta=%g, lambda=%g, "
                          "mean=(%g,%g), cov=(%g,%g,%g))",
                          p.gamma_xi, p.gamma_eta, p.lambda, p.mean_x, p.mean_y,
                          p.cov_xx, p.cov_xy, p.cov_yy);
            break;
        }
        case ModelVariant::BrownianDrift: {
            const auto& p = std::get<BrownianDriftParams>(spec_);
            std::snprintf(buf, sizeof buf,
                          "brownian_drift(gamma_xi=%g, gamma_eta=%g, cov=(%g,%g,%g))",
                          p.gamma_xi, p.gamma_eta, p.cov_xx, p.cov_xy, p.cov_yy);
            break;
        }
        case ModelVariant::JumpDiffusion: {
            const auto& p = std::get<JumpDiffusionParams>(spec_);
            if (p.jump_law == JumpLaw::Gaussian)
                std::snprintf(buf, sizeof buf,
                              "jump_diffusion(gamma_xi=%g, gamma_eta=%g, sigma2=%g, "
                              "lambda=%g, gaussian jumps N(%g,%g))",
                              p.gamma_xi, p.gamma_eta, p.sigma2, p.lambda,
                              p.jump_mean, p.jump_var);
            else
                std::snprintf(buf, sizeof buf,
                              "jump_diffusion(gamma_xi=%g, gamma_eta=%g, sigma2=%g, "
                              "lambda=%g, laplace jumps rho=%g)",
                              p.gamma_xi, p.gamma_eta, p.sigma2, p.lambda, p.rho);
            break;
        }
        case ModelVariant::VarianceGamma: {
            const auto& p = std::get<VarianceGammaParams>(spec_);
            std::snprintf(buf, sizeof buf,
                          "variance_gamma(gamma_xi=%g, gamma_eta=%g, mu=%g, c=%g, "
                          "lambda=%g)",
                          p.gamma_xi, p.gamma_eta, p.mu, p.c, p.lambda);
            break;
        }
    }
    return buf;
}

} // namespace gou
