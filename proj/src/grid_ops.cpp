#include "dynot/grid_ops.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dynot/errors.hpp"

namespace dynot {

namespace {

// Shape of a field viewed along one spatial axis: `outer` blocks of `n`
// entries of stride `inner` (outer runs over the slower axes and time).
struct AxisView {
    std::size_t inner;
    std::size_t n;
    std::size_t faces;
    std::size_t outer;
    bool periodic;
};

AxisView axis_view(const GridSpec& g, std::size_t i) {
    const AxisSpec& a = g.axis(i);
    const std::size_t inner = g.stride(i);
    const std::size_t outer = g.cells_per_slice() / (inner * a.size) * g.time_steps();
    return {inner, a.size, a.face_count(), outer, a.bc == Boundary::Periodic};
}

void check_vector_field(const CenteredVectorField& w, const GridSpec& g) {
    if (w.size() != g.dims()) {
        throw ShapeMismatch("vector field has " + std::to_string(w.size()) +
                            " components, grid has " + std::to_string(g.dims()) + " axes");
    }
    for (const auto& c : w) {
        if (c.grid() != g || c.extent() != TimeExtent::Full) {
            throw ShapeMismatch("vector field component does not match the grid");
        }
    }
}

void check_extent(const CenteredField& f, TimeExtent extent, const char* what) {
    if (f.extent() != extent) throw ShapeMismatch(what);
}

}  // namespace

BoundaryVectors build_boundary_vectors(std::span<const double> f0, std::span<const double> f1,
                                       const GridSpec& grid) {
    const std::size_t n = grid.cells_per_slice();
    if (f0.size() != n || f1.size() != n) {
        throw ShapeMismatch("boundary densities must have " + std::to_string(n) + " entries");
    }
    double m0 = 0.0;
    double m1 = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        if (!(f0[c] >= 0.0) || !(f1[c] >= 0.0)) {
            throw InvalidParams("boundary densities must be finite and nonnegative");
        }
        m0 += f0[c];
        m1 += f1[c];
    }
    if (std::abs(m0 - m1) > 1e-12 * m0) {
        throw MassMismatch("boundary masses differ: " + std::to_string(m0) + " vs " +
                           std::to_string(m1) + "; normalize before solving");
    }

    const std::size_t p = grid.time_steps();
    const double pd = static_cast<double>(p);
    BoundaryVectors bv{CenteredField(grid, TimeExtent::Full), CenteredField(grid, TimeExtent::Full)};
    auto avg_first = bv.average.slice(0);
    auto avg_last = bv.average.slice(p - 1);
    auto src_first = bv.source.slice(0);
    auto src_last = bv.source.slice(p - 1);
    for (std::size_t c = 0; c < n; ++c) {
        avg_first[c] = 0.5 * f0[c];
        avg_last[c] = 0.5 * f1[c];
        src_first[c] = pd * f0[c];
        src_last[c] = -pd * f1[c];
    }
    return bv;
}

CenteredVectorField interpolate_momentum(const MomentumField& m) {
    const GridSpec& g = m.grid();
    CenteredVectorField out = make_vector_field(g);
    for (std::size_t i = 0; i < g.dims(); ++i) {
        const AxisView v = axis_view(g, i);
        auto src = m.component(i);
        auto dst = out[i].data();
        for (std::size_t o = 0; o < v.outer; ++o) {
            const double* face = src.data() + o * v.faces * v.inner;
            double* cell = dst.data() + o * v.n * v.inner;
            for (std::size_t c = 0; c < v.n; ++c) {
                for (std::size_t k = 0; k < v.inner; ++k) {
                    double left;
                    double right;
                    if (v.periodic) {
                        left = face[c * v.inner + k];
                        right = face[((c + 1) % v.n) * v.inner + k];
                    } else {
                        left = c > 0 ? face[(c - 1) * v.inner + k] : 0.0;
                        right = c + 1 < v.n ? face[c * v.inner + k] : 0.0;
                    }
                    cell[c * v.inner + k] = 0.5 * (left + right);
                }
            }
        }
    }
    return out;
}

MomentumField interpolate_momentum_adjoint(const CenteredVectorField& w) {
    if (w.empty()) throw ShapeMismatch("vector field has no components");
    const GridSpec& g = w.front().grid();
    check_vector_field(w, g);
    MomentumField out(g);
    for (std::size_t i = 0; i < g.dims(); ++i) {
        const AxisView v = axis_view(g, i);
        auto src = w[i].data();
        auto dst = out.component(i);
        for (std::size_t o = 0; o < v.outer; ++o) {
            const double* cell = src.data() + o * v.n * v.inner;
            double* face = dst.data() + o * v.faces * v.inner;
            // Stored face s is face j = s + offset, between cells j-1 and j.
            const std::size_t offset = v.periodic ? 0 : 1;
            for (std::size_t s = 0; s < v.faces; ++s) {
                const std::size_t j = s + offset;
                const std::size_t before = (j + v.n - 1) % v.n;
                const std::size_t after = j % v.n;
                for (std::size_t k = 0; k < v.inner; ++k) {
                    face[s * v.inner + k] =
                        0.5 * (cell[before * v.inner + k] + cell[after * v.inner + k]);
                }
            }
        }
    }
    return out;
}

CenteredField interpolate_density(const CenteredField& f) {
    check_extent(f, TimeExtent::Interior, "interpolate_density expects an interior field");
    const GridSpec& g = f.grid();
    const std::size_t p = g.time_steps();
    const std::size_t n = g.cells_per_slice();
    CenteredField out(g, TimeExtent::Full);
    for (std::size_t s = 0; s < p; ++s) {
        auto dst = out.slice(s);
        // Staggered slice s averages time levels s and s+1; interior index r is level r+1.
        if (s + 1 < p) {
            auto later = f.slice(s);
            for (std::size_t c = 0; c < n; ++c) dst[c] += 0.5 * later[c];
        }
        if (s > 0) {
            auto earlier = f.slice(s - 1);
            for (std::size_t c = 0; c < n; ++c) dst[c] += 0.5 * earlier[c];
        }
    }
    return out;
}

CenteredField interpolate_density(const CenteredField& f, const BoundaryVectors& bv) {
    if (!bv.average.same_shape(CenteredField(f.grid(), TimeExtent::Full))) {
        throw ShapeMismatch("boundary vectors do not match the density grid");
    }
    CenteredField out = interpolate_density(f);
    axpy(1.0, bv.average, out);
    return out;
}

CenteredField interpolate_density_adjoint(const CenteredField& w) {
    check_extent(w, TimeExtent::Full, "interpolate_density_adjoint expects a full field");
    const GridSpec& g = w.grid();
    const std::size_t n = g.cells_per_slice();
    CenteredField out(g, TimeExtent::Interior);
    for (std::size_t r = 0; r + 1 < g.time_steps(); ++r) {
        auto dst = out.slice(r);
        auto a = w.slice(r);
        auto b = w.slice(r + 1);
        for (std::size_t c = 0; c < n; ++c) dst[c] = 0.5 * (a[c] + b[c]);
    }
    return out;
}

CenteredField continuity(const MomentumField& m, const CenteredField& f) {
    check_extent(f, TimeExtent::Interior, "continuity expects an interior density");
    if (m.grid() != f.grid()) throw ShapeMismatch("momentum and density grids differ");
    const GridSpec& g = f.grid();
    const std::size_t p = g.time_steps();
    const std::size_t n = g.cells_per_slice();
    const double pd = static_cast<double>(p);
    CenteredField out(g, TimeExtent::Full);

    for (std::size_t i = 0; i < g.dims(); ++i) {
        const AxisView v = axis_view(g, i);
        const double scale = static_cast<double>(v.n);
        auto src = m.component(i);
        auto dst = out.data();
        for (std::size_t o = 0; o < v.outer; ++o) {
            const double* face = src.data() + o * v.faces * v.inner;
            double* cell = dst.data() + o * v.n * v.inner;
            for (std::size_t c = 0; c < v.n; ++c) {
                for (std::size_t k = 0; k < v.inner; ++k) {
                    double left;
                    double right;
                    if (v.periodic) {
                        left = face[c * v.inner + k];
                        right = face[((c + 1) % v.n) * v.inner + k];
                    } else {
                        left = c > 0 ? face[(c - 1) * v.inner + k] : 0.0;
                        right = c + 1 < v.n ? face[c * v.inner + k] : 0.0;
                    }
                    cell[c * v.inner + k] += scale * (right - left);
                }
            }
        }
    }

    for (std::size_t s = 0; s < p; ++s) {
        auto dst = out.slice(s);
        if (s + 1 < p) {
            auto later = f.slice(s);
            for (std::size_t c = 0; c < n; ++c) dst[c] += pd * later[c];
        }
        if (s > 0) {
            auto earlier = f.slice(s - 1);
            for (std::size_t c = 0; c < n; ++c) dst[c] -= pd * earlier[c];
        }
    }
    return out;
}

std::pair<MomentumField, CenteredField> continuity_adjoint(const CenteredField& w) {
    check_extent(w, TimeExtent::Full, "continuity_adjoint expects a full field");
    const GridSpec& g = w.grid();
    const std::size_t n = g.cells_per_slice();
    const double pd = static_cast<double>(g.time_steps());

    MomentumField m(g);
    for (std::size_t i = 0; i < g.dims(); ++i) {
        const AxisView v = axis_view(g, i);
        const double scale = static_cast<double>(v.n);
        const std::size_t offset = v.periodic ? 0 : 1;
        auto src = w.data();
        auto dst = m.component(i);
        for (std::size_t o = 0; o < v.outer; ++o) {
            const double* cell = src.data() + o * v.n * v.inner;
            double* face = dst.data() + o * v.faces * v.inner;
            // Face j is the right face of cell j-1 (+) and the left face of cell j (-).
            for (std::size_t s = 0; s < v.faces; ++s) {
                const std::size_t j = s + offset;
                const std::size_t before = (j + v.n - 1) % v.n;
                const std::size_t after = j % v.n;
                for (std::size_t k = 0; k < v.inner; ++k) {
                    face[s * v.inner + k] =
                        scale * (cell[before * v.inner + k] - cell[after * v.inner + k]);
                }
            }
        }
    }

    CenteredField f(g, TimeExtent::Interior);
    for (std::size_t r = 0; r + 1 < g.time_steps(); ++r) {
        auto dst = f.slice(r);
        auto a = w.slice(r);
        auto b = w.slice(r + 1);
        for (std::size_t c = 0; c < n; ++c) dst[c] = pd * (a[c] - b[c]);
    }
    return {std::move(m), std::move(f)};
}

}  // namespace dynot
