#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dynot {

enum class Boundary { Neumann, Periodic };

struct AxisSpec {
    std::size_t size = 0;
    Boundary bc = Boundary::Neumann;

    /// Momentum faces along this axis: n-1 interior faces for Neumann
    /// (the two boundary faces carry zero flux), n for Periodic.
    std::size_t face_count() const { return bc == Boundary::Neumann ? size - 1 : size; }

    bool operator==(const AxisSpec&) const = default;
};

/**
 * Space-time grid: d spatial axes of cell-centered samples on [0,1]^d with
 * spacing 1/n_i, and p time steps of length 1/p.
 *
 * Every array in the library is linearized with spatial axis 0 fastest and
 * time slowest.
 */
class GridSpec {
public:
    GridSpec(std::vector<AxisSpec> axes, std::size_t time_steps);

    std::size_t dims() const { return axes_.size(); }
    const AxisSpec& axis(std::size_t i) const { return axes_[i]; }
    const std::vector<AxisSpec>& axes() const { return axes_; }
    std::size_t time_steps() const { return time_steps_; }

    /// Number of cells in one time slice (product of the axis sizes).
    std::size_t cells_per_slice() const { return cells_; }

    /// Distance between neighbouring cells along axis i in the linear index.
    std::size_t stride(std::size_t i) const { return strides_[i]; }

    /// Spatial shape with axis i replaced by its face count.
    std::vector<std::size_t> face_shape(std::size_t i) const;
    std::size_t faces_per_slice(std::size_t i) const;

    /// Spatial shape of one slice (n_0, ..., n_{d-1}).
    std::vector<std::size_t> cell_shape() const;

    bool operator==(const GridSpec&) const = default;

private:
    std::vector<AxisSpec> axes_;
    std::size_t time_steps_;
    std::size_t cells_;
    std::vector<std::size_t> strides_;
};

/// Interior fields hold the p-1 unknown time levels t = k/p, k = 1..p-1.
/// Full fields hold the p staggered levels t = (k+1/2)/p, k = 0..p-1.
enum class TimeExtent { Interior, Full };

class CenteredField {
public:
    CenteredField(GridSpec grid, TimeExtent extent);
    CenteredField(GridSpec grid, TimeExtent extent, std::vector<double> data);

    const GridSpec& grid() const { return grid_; }
    TimeExtent extent() const { return extent_; }
    std::size_t slices() const;

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }
    std::size_t size() const { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> slice(std::size_t k);
    std::span<const double> slice(std::size_t k) const;

    bool same_shape(const CenteredField& other) const;

private:
    GridSpec grid_;
    TimeExtent extent_;
    std::vector<double> data_;
};

using CenteredVectorField = std::vector<CenteredField>;

CenteredVectorField make_vector_field(const GridSpec& grid);

/**
 * Staggered momentum: component i lives on the faces normal to axis i at all
 * p staggered time levels. Its array has the cell shape with axis i replaced
 * by the face count, then time.
 *
 * Face j of axis i sits between cells j-1 and j (periodic: modulo n_i). For
 * Neumann axes only j = 1..n_i-1 is stored, at offset j-1.
 */
class MomentumField {
public:
    explicit MomentumField(GridSpec grid);

    const GridSpec& grid() const { return grid_; }
    std::size_t dims() const { return components_.size(); }

    std::span<double> component(std::size_t i) { return components_[i]; }
    std::span<const double> component(std::size_t i) const { return components_[i]; }

    std::size_t size() const;
    bool same_shape(const MomentumField& other) const { return grid_ == other.grid_; }

private:
    GridSpec grid_;
    std::vector<std::vector<double>> components_;
};

// Elementwise helpers over the flat storage. All require equal shapes.
double dot(const CenteredField& a, const CenteredField& b);
double dot(const MomentumField& a, const MomentumField& b);
double dot(const CenteredVectorField& a, const CenteredVectorField& b);
double norm(const CenteredField& a);
double norm(const MomentumField& a);
double norm(const CenteredVectorField& a);

/// y += alpha * x
void axpy(double alpha, const CenteredField& x, CenteredField& y);
void axpy(double alpha, const MomentumField& x, MomentumField& y);
void axpy(double alpha, const CenteredVectorField& x, CenteredVectorField& y);

}  // namespace dynot
