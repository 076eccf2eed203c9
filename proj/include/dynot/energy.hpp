#pragma once

#include <span>

#include "dynot/grid.hpp"

namespace dynot {

/// Momentum-like field u and density-like field v on the staggered cells.
/// The dual variables of the solver share this shape.
struct CenteredPair {
    CenteredVectorField u;
    CenteredField v;

    explicit CenteredPair(const GridSpec& grid)
        : u(make_vector_field(grid)), v(grid, TimeExtent::Full) {}
    CenteredPair(CenteredVectorField u_, CenteredField v_) : u(std::move(u_)), v(std::move(v_)) {}
};

/// |u|^2 / (2v) for one cell: 0 at (0,0), +inf when v < 0 or (v == 0, u != 0).
double kinetic_energy_density(std::span<const double> u, double v);

/// Sum of the cell energies; may be +inf.
double kinetic_energy(const CenteredPair& pair);

struct ProxResult {
    double v = 0.0;
    int newton_iterations = 0;
    bool used_bisection = false;
};

/**
 * Proximal map of the cell energy with weight sigma:
 *   argmin |u|^2/(2v) + sigma/2 (|u - a_m|^2 + (v - a_f)^2).
 *
 * v is the largest real root of 2(1 + sigma v)^2 (v - a_f) - sigma |a_m|^2
 * when positive, else the minimizer is (0, 0). Writes u into `u_out`
 * (same length as `a_m`) and returns v. Throws NonConvergence if neither
 * Newton nor the bisection fallback meets the residual tolerance.
 */
ProxResult prox_kinetic(std::span<const double> a_m, double a_f, double sigma,
                        std::span<double> u_out);

/// Residual of the optimality cubic at v.
double prox_cubic(double v, double a_m_sq, double a_f, double sigma);

/// prox_kinetic applied independently at every cell.
CenteredPair prox_kinetic_field(const CenteredPair& in, double sigma);

}  // namespace dynot
