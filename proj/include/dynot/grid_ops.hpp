#pragma once

#include <span>
#include <utility>

#include "dynot/grid.hpp"

namespace dynot {

/**
 * Fixed time-boundary data folded into the staggered operators.
 *
 * `average` is added after temporal averaging of the interior density:
 * f0/2 on the first staggered slice, f1/2 on the last, zero elsewhere.
 * `source` is the right-hand side of the discrete continuity equation:
 * p*f0 on the first slice, -p*f1 on the last, zero elsewhere.
 */
struct BoundaryVectors {
    CenteredField average;
    CenteredField source;
};

/// Throws MassMismatch when the two masses differ by more than 1e-12 relative,
/// and InvalidParams for negative entries or wrong lengths.
BoundaryVectors build_boundary_vectors(std::span<const double> f0, std::span<const double> f1,
                                       const GridSpec& grid);

/// Two-point average of adjacent faces onto cell centres, one component per axis.
CenteredVectorField interpolate_momentum(const MomentumField& m);
MomentumField interpolate_momentum_adjoint(const CenteredVectorField& w);

/// Temporal two-point average of the interior density, without boundary terms.
CenteredField interpolate_density(const CenteredField& f);
/// Temporal average with the boundary densities: (f0, f(1/p), ..., f((p-1)/p), f1).
CenteredField interpolate_density(const CenteredField& f, const BoundaryVectors& bv);
CenteredField interpolate_density_adjoint(const CenteredField& w);

/// Discrete continuity residual: scaled spatial divergence of m plus scaled
/// time difference of f on every staggered cell. Boundary densities are not
/// included; the constraint reads continuity(m, f) == bv.source.
CenteredField continuity(const MomentumField& m, const CenteredField& f);
std::pair<MomentumField, CenteredField> continuity_adjoint(const CenteredField& w);

}  // namespace dynot
