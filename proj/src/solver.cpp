#include "dynot/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dynot/errors.hpp"

namespace dynot {

namespace {

double safe_ratio(double num, double den) {
    return den > 0.0 ? num / den : num;
}

double coupling_norm(const MomentumField& m, const CenteredField& f, const CenteredPair& uv,
                     const BoundaryVectors& bv) {
    CenteredVectorField du = interpolate_momentum(m);
    axpy(-1.0, uv.u, du);
    CenteredField dv = interpolate_density(f, bv);
    axpy(-1.0, uv.v, dv);
    return norm(du) + norm(dv);
}

double constraint_norm(const MomentumField& m, const CenteredField& f, const BoundaryVectors& bv) {
    CenteredField r = continuity(m, f);
    axpy(-1.0, bv.source, r);
    return norm(r);
}

Diagnostics make_diagnostics(const MomentumField& m, const CenteredField& f,
                             const CenteredPair& uv, const BoundaryVectors& bv) {
    Diagnostics d;
    d.objective = kinetic_energy(uv);
    d.constraint_residual = safe_ratio(constraint_norm(m, f, bv), norm(bv.source));
    d.coupling_residual = safe_ratio(coupling_norm(m, f, uv, bv), norm(bv.average));
    return d;
}

}  // namespace

void SolverParams::validate() const {
    if (!(tau > 0.0) || !(sigma > 0.0)) throw InvalidParams("tau and sigma must be positive");
    if (!(tau * sigma < 1.0)) {
        throw InvalidParams("step sizes need tau*sigma < 1, got " + std::to_string(tau * sigma));
    }
    if (!std::isfinite(theta)) throw InvalidParams("theta must be finite");
    if (!(rel_change_tol >= 0.0)) throw InvalidParams("rel_change_tol must be nonnegative");
    if (report_every == 0) throw InvalidParams("report_every must be at least 1");
}

SolverState::SolverState(const GridSpec& grid)
    : m(grid), f(grid, TimeExtent::Interior), uv(grid), b(grid), b_bar(grid) {}

std::pair<MomentumField, CenteredField> project_onto_continuity(const MomentumField& a_m,
                                                                const CenteredField& a_f,
                                                                const SpectralPlan& plan,
                                                                const BoundaryVectors& bv) {
    if (a_m.grid() != plan.grid() || a_f.grid() != plan.grid()) {
        throw ShapeMismatch("projection input does not match the spectral plan");
    }
    CenteredField r = continuity(a_m, a_f);
    axpy(-1.0, bv.source, r);
    auto [gm, gf] = continuity_adjoint(plan.apply_pseudo_inverse(r));
    MomentumField m = a_m;
    CenteredField f = a_f;
    axpy(-1.0, gm, m);
    axpy(-1.0, gf, f);
    return {std::move(m), std::move(f)};
}

PdhgSolver::PdhgSolver(TransportProblem problem, SolverParams params)
    : problem_(std::move(problem)),
      params_(params),
      bv_(build_boundary_vectors(problem_.f0, problem_.f1, problem_.grid)),
      plan_(problem_.grid),
      state_(problem_.grid) {
    params_.validate();
}

Diagnostics PdhgSolver::diagnostics() const {
    Diagnostics d = make_diagnostics(state_.m, state_.f, state_.uv, bv_);
    d.iteration = state_.iteration;
    d.primal_change = state_.primal_change;
    return d;
}

void PdhgSolver::step() {
    const double ts = params_.tau * params_.sigma;
    SolverState& s = state_;

    // Step 1: project the dual-corrected primal point onto the constraint.
    MomentumField a_m = s.m;
    axpy(-ts, interpolate_momentum_adjoint(s.b_bar.u), a_m);
    CenteredField a_f = s.f;
    axpy(-ts, interpolate_density_adjoint(s.b_bar.v), a_f);
    auto [m_next, f_next] = project_onto_continuity(a_m, a_f, plan_, bv_);

    // Step 2: prox of the energy at the interpolated point shifted by the duals.
    CenteredPair interp(interpolate_momentum(m_next), interpolate_density(f_next, bv_));
    CenteredPair shifted = interp;
    axpy(1.0, s.b.u, shifted.u);
    axpy(1.0, s.b.v, shifted.v);
    CenteredPair uv = prox_kinetic_field(shifted, params_.sigma);

    // Steps 3-4: dual ascent and over-relaxation.
    CenteredPair b_next = s.b;
    axpy(1.0, interp.u, b_next.u);
    axpy(-1.0, uv.u, b_next.u);
    axpy(1.0, interp.v, b_next.v);
    axpy(-1.0, uv.v, b_next.v);

    CenteredPair b_bar = b_next;
    axpy(params_.theta, b_next.u, b_bar.u);
    axpy(-params_.theta, s.b.u, b_bar.u);
    axpy(params_.theta, b_next.v, b_bar.v);
    axpy(-params_.theta, s.b.v, b_bar.v);

    MomentumField dm = m_next;
    axpy(-1.0, s.m, dm);
    CenteredField df = f_next;
    axpy(-1.0, s.f, df);
    const double change = std::hypot(norm(dm), norm(df));
    const double size = std::hypot(norm(m_next), norm(f_next));
    s.primal_change = safe_ratio(change, size);

    s.m = std::move(m_next);
    s.f = std::move(f_next);
    s.uv = std::move(uv);
    s.b = std::move(b_next);
    s.b_bar = std::move(b_bar);
    ++s.iteration;
}

SolveResult PdhgSolver::run(const Observer& observer) {
    SolverState& s = state_;
    auto record = [&] {
        s.history.push_back(diagnostics());
        if (observer) observer(s.history.back());
    };
    if (s.history.empty()) record();
    while (s.iteration < params_.max_iter) {
        step();
        const bool stop = s.primal_change < params_.rel_change_tol;
        const bool last = stop || s.iteration == params_.max_iter;
        if (last || s.iteration % params_.report_every == 0) record();
        if (stop) break;
    }
    return SolveResult{s.m, s.f, s.uv, s.history};
}

SolveResult solve_transport(const TransportProblem& problem, const SolverParams& params,
                            const PdhgSolver::Observer& observer) {
    return PdhgSolver(problem, params).run(observer);
}

Diagnostics evaluate_solution(const MomentumField& m, const CenteredField& f,
                              const CenteredPair& uv, const TransportProblem& problem) {
    if (m.grid() != problem.grid || f.grid() != problem.grid) {
        throw ShapeMismatch("solution does not match the problem grid");
    }
    const BoundaryVectors bv = build_boundary_vectors(problem.f0, problem.f1, problem.grid);
    return make_diagnostics(m, f, uv, bv);
}

Diagnostics evaluate_solution(const MomentumField& m, const CenteredField& f,
                              const TransportProblem& problem) {
    const BoundaryVectors bv = build_boundary_vectors(problem.f0, problem.f1, problem.grid);
    CenteredPair uv(interpolate_momentum(m), interpolate_density(f, bv));
    return evaluate_solution(m, f, uv, problem);
}

std::vector<std::vector<double>> density_frames(const TransportProblem& problem,
                                                const CenteredField& f) {
    if (f.grid() != problem.grid || f.extent() != TimeExtent::Interior) {
        throw ShapeMismatch("density does not match the problem grid");
    }
    std::vector<std::vector<double>> frames;
    frames.reserve(problem.grid.time_steps() + 1);
    frames.push_back(problem.f0);
    for (std::size_t k = 0; k < f.slices(); ++k) {
        auto s = f.slice(k);
        frames.emplace_back(s.begin(), s.end());
    }
    frames.push_back(problem.f1);
    return frames;
}

double continuous_action(double objective, const GridSpec& grid) {
    return objective / static_cast<double>(grid.time_steps());
}

}  // namespace dynot
