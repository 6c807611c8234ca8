#ifndef GOU_ESTIMATE_HPP
#define GOU_ESTIMATE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "gou/analysis.hpp"
#include "gou/models.hpp"
#include "gou/stats.hpp"

namespace gou {

/// Monte Carlo knobs shared by the estimators. Streams are derived from
/// (seed, stream_offset + path id), so estimators given disjoint offsets
/// draw independent randomness and results never depend on worker count.
struct McConfig {
    std::uint64_t n_paths = 10000;
    std::uint64_t seed = 0;
    double h = 1.0 / 256.0;
    double theta = 30.0;   // stop once xi >= theta
    double t_max = 200.0;  // hard horizon (censoring)
    int workers = 0;       // <= 0: hardware concurrency
    int blocks = 20;       // median-of-means blocks
    std::uint64_t stream_offset = 0;
};

struct RuinPoint {
    double z = 0.0;
    double psi_hat = 0.0;
    Interval ci;
    std::uint64_t n_paths = 0;
    std::uint64_t n_ruined = 0;
    double censored_frac = 0.0;   // stopped at t_max while still unruined
    double underflow_frac = 0.0;  // paths where e^{-xi} underflowed
};

struct RuinCurve {
    std::vector<RuinPoint> points;
    double horizon = 0.0;  // t_max used
    double theta = 0.0;
};

/// Raw pass over common-random-number paths: per z, ruin counts and
/// censoring; optionally, counts of ruin times below given thresholds
/// (one threshold vector per z, for the finite-time law).
struct RuinCounts {
    std::vector<std::uint64_t> ruined;
    std::vector<std::uint64_t> censored_tmax;
    std::vector<std::vector<std::uint64_t>> below_threshold;
    std::uint64_t underflow = 0;
    std::uint64_t n_paths = 0;
};

RuinCounts run_ruin_paths(const Model& model, const std::vector<double>& z_grid,
                          const std::vector<std::vector<double>>& thresholds,
                          const McConfig& cfg);

/// psi_hat(z) over the z grid with Wilson intervals, shared paths across all
/// z (so psi_hat is exactly nonincreasing in z). Throws ZeroPaths.
RuinCurve estimate_ruin_curve(const Model& model,
                              const std::vector<double>& z_grid,
                              const McConfig& cfg);

struct RuinTimePoint {
    double x = 0.0;
    double threshold = 0.0;  // x * ln z
    double p_hat = 0.0;
    Interval ci;
    std::uint64_t count = 0;
    double normalized_rate = 0.0;  // -ln p_hat / ln z, +inf when p_hat = 0
};

struct RuinTimeCdf {
    double z = 0.0;
    std::vector<RuinTimePoint> points;
    double psi_hat = 0.0;  // ruin probability at the same horizon
    double psi_normalized_rate = 0.0;
    std::uint64_t n_paths = 0;
};

/// Empirical law of T_z at thresholds x ln z for a single ruin level.
RuinTimeCdf estimate_ruin_time_cdf(const Model& model, double z,
                                   const std::vector<double>& x_grid,
                                   const McConfig& cfg);

struct CramerConstantEstimate {
    double value = 0.0;
    Interval ci;
    double w = 0.0;
    double mu_star = 0.0;
    bool dispersion_flag = false;  // block means disperse: heavy-tail warning
    int blocks = 0;
    std::uint64_t n_samples = 0;
};

/// Goldie-formula estimate of the Cramer constant: samples (M, Q, Lbar) from
/// unit-interval paths and an independent copy of inf_t Z_t from long-horizon
/// paths, then evaluates the defining expectation by median-of-means.
CramerConstantEstimate estimate_cramer_constant(const Model& model,
                                                const CramerProfile& profile,
                                                const McConfig& cfg);

struct CramerFit {
    double slope = 0.0;
    double slope_se = 0.0;
    double intercept = 0.0;
    std::vector<double> z_used;
    std::vector<double> plateau;  // z^w psi_hat per used grid point
    double w = 0.0;
};

/// Weighted log-log fit of the ruin curve against the predicted power law,
/// using only points with at least 10 ruins. Throws InsufficientRuins when
/// fewer than 4 points qualify.
CramerFit fit_cramer_asymptotics(const RuinCurve& curve, double w);

struct LaplaceCheckPoint {
    double alpha = 0.0;
    double mc_log = 0.0;      // ln of the empirical mean of e^{-alpha xi_1}
    double closed_form = 0.0; // c(alpha)
    double z_score = 0.0;
    double rel_se = 0.0;
    double max_share = 0.0;   // largest single-term share of the sum
    bool stable = true;
};

/// Monte Carlo check of the Laplace exponent on a grid of alphas inside the
/// domain; flags dispersion-dominated (heavy-tail) cells. Throws OutOfDomain
/// if the grid leaves the domain.
std::vector<LaplaceCheckPoint> empirical_laplace_check(
    const Model& model, const std::vector<double>& alpha_grid,
    const McConfig& cfg);

/// Runs fn(chunk_index, begin, end) over [0, n) split into fixed chunks,
/// distributed over a small thread pool. Chunk boundaries do not depend on
/// the worker count, so per-chunk results can be reduced deterministically.
void parallel_chunks(std::uint64_t n, std::uint64_t chunk, int workers,
                     const std::function<void(std::size_t, std::uint64_t,
                                              std::uint64_t)>& fn);

} // namespace gou

#endif
