#ifndef GOU_ANALYSIS_HPP
#define GOU_ANALYSIS_HPP

#include <string>

#include "gou/models.hpp"

namespace gou {

/// Cramer-theoretic quantities derived from a model's Laplace exponent.
///   w        positive root of c (Lundberg coefficient), |c(w)| <= 1e-10
///   mu_star  c'(w) > 0, the tilted mean
///   alpha0   upper moment order (equals the domain's upper end here)
///   x0       limit of 1/c'(alpha) toward alpha0 (0 for all four families)
struct CramerProfile {
    double w = 0.0;
    double mu_star = 0.0;
    double alpha0 = 0.0;
    double x0 = 0.0;
    double root_residual = 0.0;
    ExponentDomain domain;
};

enum class Verdict { Verified, NotVerified, Failed };

struct ConditionVerdict {
    Verdict verdict = Verdict::NotVerified;
    std::string reason;
};

/// Witnessed verdicts for the ruin-asymptotics conditions A, B, C. A is
/// only ever Verified through the per-family sufficient arguments; anything
/// outside them stays NotVerified.
struct ConditionReport {
    ConditionVerdict cond_a, cond_b, cond_c;
    double w = 0.0;        // Condition B witness
    double epsilon = 0.0;  // Condition C witnesses
    double p = 0.0;
    double q = 0.0;

    bool all_verified() const {
        return cond_a.verdict == Verdict::Verified &&
               cond_b.verdict == Verdict::Verified &&
               cond_c.verdict == Verdict::Verified;
    }
};

const char* verdict_name(Verdict v);

/// Finds the Lundberg coefficient and derived constants. Throws
/// NoPositiveRoot when c has no root in (0, alpha_hi) and
/// NonNegativeDriftDerivative when c'(0) >= 0.
CramerProfile lundberg_and_profile(const Model& model);

/// Fenchel-Legendre transform c*(v) = sup_alpha { alpha v - c(alpha) }.
/// For the four families c' sweeps all of R, so the supremum is attained at
/// an interior point; the endpoint-limit fallback is kept for near-boundary
/// numerics and returns the supremum over a geometric approach to the
/// endpoint.
double fenchel_legendre(const Model& model, double v);

/// Rate function R(x) = x c*(1/x) on (x0, 1/mu*), = w for x >= 1/mu*.
/// Throws BelowX0 for x <= x0.
double rate_function(const CramerProfile& profile, const Model& model, double x);

ConditionReport check_conditions(const Model& model);

} // namespace gou

#endif
