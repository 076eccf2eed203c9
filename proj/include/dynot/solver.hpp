#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dynot/energy.hpp"
#include "dynot/grid.hpp"
#include "dynot/grid_ops.hpp"
#include "dynot/spectral.hpp"

namespace dynot {

/// Endpoint densities (one value per cell of a slice) on a space-time grid.
struct TransportProblem {
    GridSpec grid;
    std::vector<double> f0;
    std::vector<double> f1;
};

struct SolverParams {
    double tau = 0.95;
    double sigma = 0.95;
    double theta = 1.0;
    std::size_t max_iter = 2000;
    double rel_change_tol = 0.0;  // 0 runs the full budget
    std::size_t report_every = 10;

    /// Throws InvalidParams unless tau, sigma > 0, tau*sigma < 1 and report_every >= 1.
    void validate() const;
};

struct Diagnostics {
    std::size_t iteration = 0;
    double objective = 0.0;            // kinetic energy of the current (u, v)
    double constraint_residual = 0.0;  // |A(m,f) - source| / |source|
    double coupling_residual = 0.0;    // (|S_M m - u| + |S_F f + avg - v|) / |avg|
    double primal_change = 0.0;        // |x_new - x_old| / |x_new|
};

/// Primal, auxiliary and (scaled) dual iterates of the primal-dual scheme.
struct SolverState {
    MomentumField m;
    CenteredField f;
    CenteredPair uv;
    CenteredPair b;
    CenteredPair b_bar;
    std::size_t iteration = 0;
    double primal_change = 0.0;
    std::vector<Diagnostics> history;

    explicit SolverState(const GridSpec& grid);
};

struct SolveResult {
    MomentumField m;
    CenteredField f;
    CenteredPair uv;
    std::vector<Diagnostics> history;
};

/// Euclidean projection of (a_m, a_f) onto {continuity(m, f) == bv.source}.
std::pair<MomentumField, CenteredField> project_onto_continuity(const MomentumField& a_m,
                                                                const CenteredField& a_f,
                                                                const SpectralPlan& plan,
                                                                const BoundaryVectors& bv);

/**
 * Primal-dual iteration for the staggered dynamic transport problem.
 *
 * Each step projects onto the continuity constraint, applies the kinetic
 * energy prox at the interpolated point, and updates and over-relaxes the
 * duals. The spectral plan and boundary vectors are built once here.
 */
class PdhgSolver {
public:
    PdhgSolver(TransportProblem problem, SolverParams params);

    using Observer = std::function<void(const Diagnostics&)>;

    void step();
    /// Iterates until max_iter or the relative-change stop and returns the result.
    /// The observer, if any, sees every recorded history entry.
    SolveResult run(const Observer& observer = {});

    const SolverState& state() const { return state_; }
    const TransportProblem& problem() const { return problem_; }
    const BoundaryVectors& boundary() const { return bv_; }
    const SpectralPlan& plan() const { return plan_; }
    Diagnostics diagnostics() const;

private:
    TransportProblem problem_;
    SolverParams params_;
    BoundaryVectors bv_;
    SpectralPlan plan_;
    SolverState state_;
};

SolveResult solve_transport(const TransportProblem& problem, const SolverParams& params,
                            const PdhgSolver::Observer& observer = {});

/// Diagnostics recomputed from scratch for a primal point and its (u, v).
/// primal_change is reported as 0 since it needs two iterates.
Diagnostics evaluate_solution(const MomentumField& m, const CenteredField& f,
                              const CenteredPair& uv, const TransportProblem& problem);
/// Same, with (u, v) taken as the interpolants of (m, f).
Diagnostics evaluate_solution(const MomentumField& m, const CenteredField& f,
                              const TransportProblem& problem);

/// The p+1 density frames f0, f(1/p), ..., f((p-1)/p), f1.
std::vector<std::vector<double>> density_frames(const TransportProblem& problem,
                                                const CenteredField& f);

/// Kinetic energy scaled to the continuous action: the time quadrature weight
/// 1/p applied to the slice sum (densities are cell masses, so no spatial weight).
double continuous_action(double objective, const GridSpec& grid);

/// Result of the 1D quantile-coupling reference solution.
struct QuantileTransport {
    double w2_squared = 0.0;
    std::vector<std::vector<double>> frames;  // one per requested time
};

/**
 * Exact 1D quadratic transport between two histograms on the cell midpoints
 * (j + 1/2)/n of [0, 1] via monotone (inverse-CDF) matching. Interpolants at
 * time t push each matched mass piece to (1-t) x + t y and split it linearly
 * between the two nearest cell midpoints.
 */
QuantileTransport quantile_transport_1d(std::span<const double> f0, std::span<const double> f1,
                                        std::span<const double> times);

}  // namespace dynot
