#ifndef GOU_MODELS_HPP
#define GOU_MODELS_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "gou/errors.hpp"
#include "gou/random.hpp"

namespace gou {

/// Bivariate compound Poisson process with drift; jump marks (X, Y) are
/// bivariate Gaussian with mean (mean_x, mean_y) and covariance
/// [[cov_xx, cov_xy], [cov_xy, cov_yy]].
struct CpGaussianParams {
    double gamma_xi = 0.0;
    double gamma_eta = 0.0;
    double lambda = 0.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double cov_xx = 0.0;
    double cov_xy = 0.0;
    double cov_yy = 0.0;

    bool operator==(const CpGaussianParams&) const = default;
};

/// Correlated Brownian motions with drift; covariance per unit time is
/// [[cov_xx, cov_xy], [cov_xy, cov_yy]] for (xi, eta).
struct BrownianDriftParams {
    double gamma_xi = 0.0;
    double gamma_eta = 0.0;
    double cov_xx = 0.0;
    double cov_xy = 0.0;
    double cov_yy = 0.0;

    bool operator==(const BrownianDriftParams&) const = default;
};

enum class JumpLaw { Gaussian, Laplace };

/// xi is a jump diffusion, eta the shared Brownian component: both ride the
/// same Brownian motion of variance sigma2 per unit time, jumps hit xi only.
struct JumpDiffusionParams {
    double gamma_xi = 0.0;
    double gamma_eta = 0.0;
    double sigma2 = 0.0;
    double lambda = 0.0;
    JumpLaw jump_law = JumpLaw::Gaussian;
    double jump_mean = 0.0;  // Gaussian jumps
    double jump_var = 0.0;   // Gaussian jumps
    double rho = 0.0;        // Laplace jumps

    bool operator==(const JumpDiffusionParams&) const = default;
};

/// Variance-gamma xi (Brownian motion subordinated by a gamma process, plus
/// drift) with the subordinator itself driving eta.
struct VarianceGammaParams {
    double gamma_xi = 0.0;
    double gamma_eta = 0.0;
    double mu = 0.0;
    double c = 0.0;
    double lambda = 0.0;

    bool operator==(const VarianceGammaParams&) const = default;
};

using ModelSpec = std::variant<CpGaussianParams, BrownianDriftParams,
                               JumpDiffusionParams, VarianceGammaParams>;

enum class ModelVariant { CpGaussian, BrownianDrift, JumpDiffusion, VarianceGamma };

/// Open interval on which the Laplace exponent is finite. Zero is always
/// interior. A singular endpoint means c blows up there (rather than the
/// bound being +-infinity).
struct ExponentDomain {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool singular_lo = false;
    bool singular_hi = false;

    bool contains(double alpha) const { return alpha > lo && alpha < hi; }
};

struct LaplaceDerivatives {
    double first = 0.0;
    double second = 0.0;
};

struct Jump {
    double time = 0.0;
    double dxi = 0.0;
    double deta = 0.0;
};

/// Exact sample of the joint increment over a window of length dt, with the
/// finite-activity jumps listed at their exact times within (0, dt].
struct Increment {
    double dxi = 0.0;
    double deta = 0.0;
    std::vector<Jump> jumps;
};

/// A model whose parameters passed validation (or were deliberately accepted
/// unchecked for test oracles). Everything downstream works through this
/// handle; the exponent domain and Cholesky factors are computed once.
class Model {
public:
    /// Enforces the per-variant parameter constraints; throws ValidationError
    /// (DriftViolation, NonPositiveDefinite, NonPositiveIntensity,
    /// ConditionAViolation) if any fails.
    static Model validate(const ModelSpec& spec);

    /// Accepts degenerate parameter sets (zero intensity, singular
    /// covariance) for use as closed-form test oracles. Not for production
    /// runs; check_conditions reports on such models honestly.
    static Model unchecked(const ModelSpec& spec);

    const ModelSpec& spec() const { return spec_; }
    ModelVariant variant() const { return variant_; }
    bool was_validated() const { return validated_; }
    const ExponentDomain& domain() const { return domain_; }

    /// c(alpha) = ln E e^{-alpha xi_1}. Returns +infinity outside the domain.
    double laplace_exponent(double alpha) const;

    /// Closed-form c'(alpha) and c''(alpha); throws OutOfDomain unless alpha
    /// is strictly inside the domain.
    LaplaceDerivatives laplace_exponent_derivatives(double alpha) const;

    /// Exact joint increment over dt. Finite-activity variants report their
    /// jumps; VG has none (infinite activity lives inside the subordinator).
    Increment sample_increment(double dt, RandomStream& rng) const;

    /// True when paths are piecewise linear between jumps (compound Poisson
    /// with drift), enabling closed-form segment integration of Z.
    bool piecewise_linear() const { return variant_ == ModelVariant::CpGaussian; }

    bool has_jumps() const {
        return variant_ == ModelVariant::CpGaussian ||
               variant_ == ModelVariant::JumpDiffusion;
    }

    double gamma_xi() const;
    double gamma_eta() const;
    double jump_intensity() const;

    /// Mean jump size in xi (0 when there are no jumps).
    double mean_jump_xi() const;

    /// Lower Cholesky factor entries of the relevant 2x2 covariance
    /// (jump-mark covariance for CpGaussian, Brownian covariance for
    /// BrownianDrift). l11*g1, l21*g1 + l22*g2 maps iid normals.
    void cholesky(double& l11, double& l21, double& l22) const;

    std::string describe() const;

private:
    Model(const ModelSpec& spec, bool validated);
    void prepare();

    ModelSpec spec_;
    ModelVariant variant_;
    bool validated_ = false;
    ExponentDomain domain_;
    double l11_ = 0.0, l21_ = 0.0, l22_ = 0.0;
};

const char* variant_name(ModelVariant v);

} // namespace gou

#endif
