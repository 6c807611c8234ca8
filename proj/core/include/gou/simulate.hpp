#ifndef GOU_SIMULATE_HPP
#define GOU_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "gou/models.hpp"

namespace gou {

/// Hybrid time grid: uniform mesh of step h plus the exact jump times of the
/// finite-activity variants.
struct SimGrid {
    double horizon = 0.0;
    double h = 0.0;
    std::vector<double> jump_times;
};

/// One simulated trajectory of (xi, eta, Z) on the hybrid grid, with the
/// running minimum of Z and provenance that pins the path down bit-exactly.
struct PathBundle {
    SimGrid grid;
    std::vector<double> t, xi, eta, z, runmin_z;
    std::uint64_t seed = 0;
    std::uint64_t path_id = 0;
    bool underflow = false;
};

/// Walks a path left to right one grid point at a time without storing it.
/// Z is advanced with left-point (predictable) increments; for piecewise
/// linear paths (compound Poisson with drift) each segment is integrated in
/// closed form, which is exact rather than O(h)-biased.
class PathStepper {
public:
    PathStepper(const Model& model, double h, RandomStream rng);

    /// Advance to the next grid point (mesh point or jump), capped at t_cap.
    /// Returns false when already at t_cap.
    bool step(double t_cap);

    double t() const { return t_; }
    double xi() const { return xi_; }
    double eta() const { return eta_; }
    double z() const { return z_; }
    bool last_was_jump() const { return last_was_jump_; }
    bool underflow() const { return underflow_; }

private:
    void advance_segment(double dt);
    void apply_jump();

    const Model* model_;
    ModelVariant variant_;
    double h_;
    RandomStream rng_;
    double t_ = 0.0, xi_ = 0.0, eta_ = 0.0, z_ = 0.0;
    std::uint64_t next_mesh_k_ = 1;
    double next_jump_t_;
    bool last_was_jump_ = false;
    bool underflow_ = false;

    // cached parameters for the hot loop
    double gxi_ = 0.0, geta_ = 0.0;
    double l11_ = 0.0, l21_ = 0.0, l22_ = 0.0;
    double lambda_ = 0.0;
    double sigma_ = 0.0;  // jump diffusion: sqrt(sigma2)
    double jmean_ = 0.0, jsd_ = 0.0, rho_ = 0.0;
    JumpLaw jump_law_ = JumpLaw::Gaussian;
    double vg_c_ = 0.0, vg_lambda_ = 0.0, vg_mu_ = 0.0;
};

/// Simulates a full path on [0, horizon]. The stream for path i of a run is
/// derived from (seed, stream_offset + i), so any path can be regenerated in
/// isolation and results cannot depend on scheduling.
PathBundle simulate_path(const Model& model, double horizon, double h,
                         std::uint64_t seed, std::uint64_t path_id,
                         std::uint64_t stream_offset = 0);

struct RuinTime {
    double time = 0.0;
    bool censored = true;  // censored at the horizon: no crossing seen
};

struct GouPath {
    std::vector<double> v;
    RuinTime ruin;
};

/// V_t = e^{xi_t} (v0 + Z_t) along the bundle's grid, plus the first grid
/// time with V < 0 (equivalently Z < -v0). Throws NegativeInitialValue.
GouPath gou_path(const PathBundle& path, double v0);

/// Unit-interval SRE quantities of the embedding at integer times.
/// (m, q) = (C^{-1}, D) is the primary, numerically stable route; (a, b) are
/// defined through the pathwise identity (A_n, B_n) = (C_n, C_n D_n), and
/// m is stored as 1/c exactly.
struct DiscreteEmbedding {
    int n = 0;
    std::vector<double> a, b, c, d;
    std::vector<double> m, q;
    std::vector<double> l_sup;   // supremum perturbation of the interval
    std::vector<double> l_bar;   // infimum perturbation with leading minus
    std::vector<double> x_up;    // perturbed partial sums from (M, Q, L_sup)
    std::vector<double> x_hat;   // ruin direction: (M, -Q, -L_bar)
    std::vector<double> grid_sup, grid_inf;  // extremes of Z over ((n-1), n]
    std::vector<double> z_at_int, xi_at_int; // indices 0..n
};

/// Computes the embedding from a stored path. Requires an integer horizon
/// with every integer time present on the grid; throws NonIntegerHorizon.
DiscreteEmbedding discrete_embedding(const PathBundle& path);

/// Z_n reconstructed from the embedding as sum_i prod_{j<i} C_j^{-1} D_i.
std::vector<double> reconstruct_z(const DiscreteEmbedding& emb);

/// V_n reconstructed from the solution formula of the SRE with (A_n, B_n):
/// V_n = V_0 prod A_j + sum_i prod_{j>i} A_j B_i.
std::vector<double> reconstruct_v(const DiscreteEmbedding& emb, double v0);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

struct IidReport {
    std::vector<KsResult> ks;      // marginal comparisons across n
    std::vector<std::string> ks_label;
    double autocorr_m = 0.0;       // pooled lag-1 autocorrelations
    double autocorr_q = 0.0;
    double autocorr_bound = 0.0;   // 4/sqrt(N)
    bool pass = false;
};

/// Distributional iid checks on (M_n, Q_n, L_bar_n) across paths and n:
/// two-sample KS between early and late n, plus pooled lag-1
/// autocorrelations. Throws InsufficientSamples below 1000 paths.
IidReport iid_diagnostics(const std::vector<DiscreteEmbedding>& embeddings,
                          double significance = 0.01);

} // namespace gou

#endif
