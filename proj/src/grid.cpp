#include "dynot/grid.hpp"

#include <cmath>
#include <string>

#include "dynot/errors.hpp"

namespace dynot {

GridSpec::GridSpec(std::vector<AxisSpec> axes, std::size_t time_steps)
    : axes_(std::move(axes)), time_steps_(time_steps), cells_(1) {
    if (axes_.empty() || axes_.size() > 4) {
        throw InvalidGrid("grid needs between 1 and 4 spatial axes, got " +
                          std::to_string(axes_.size()));
    }
    if (time_steps_ < 2) {
        throw InvalidGrid("grid needs at least 2 time steps, got " + std::to_string(time_steps_));
    }
    strides_.reserve(axes_.size());
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (axes_[i].size < 2) {
            throw InvalidGrid("axis " + std::to_string(i) + " has " +
                              std::to_string(axes_[i].size) + " cells; at least 2 are required");
        }
        strides_.push_back(cells_);
        cells_ *= axes_[i].size;
    }
}

std::vector<std::size_t> GridSpec::cell_shape() const {
    std::vector<std::size_t> shape;
    shape.reserve(axes_.size());
    for (const auto& a : axes_) shape.push_back(a.size);
    return shape;
}

std::vector<std::size_t> GridSpec::face_shape(std::size_t i) const {
    auto shape = cell_shape();
    shape[i] = axes_[i].face_count();
    return shape;
}

std::size_t GridSpec::faces_per_slice(std::size_t i) const {
    return cells_ / axes_[i].size * axes_[i].face_count();
}

CenteredField::CenteredField(GridSpec grid, TimeExtent extent)
    : grid_(std::move(grid)), extent_(extent) {
    data_.assign(grid_.cells_per_slice() * slices(), 0.0);
}

CenteredField::CenteredField(GridSpec grid, TimeExtent extent, std::vector<double> data)
    : grid_(std::move(grid)), extent_(extent), data_(std::move(data)) {
    if (data_.size() != grid_.cells_per_slice() * slices()) {
        throw ShapeMismatch("centered field data has " + std::to_string(data_.size()) +
                            " values, grid expects " +
                            std::to_string(grid_.cells_per_slice() * slices()));
    }
}

std::size_t CenteredField::slices() const {
    return extent_ == TimeExtent::Full ? grid_.time_steps() : grid_.time_steps() - 1;
}

std::span<double> CenteredField::slice(std::size_t k) {
    const std::size_t n = grid_.cells_per_slice();
    return std::span<double>(data_).subspan(k * n, n);
}

std::span<const double> CenteredField::slice(std::size_t k) const {
    const std::size_t n = grid_.cells_per_slice();
    return std::span<const double>(data_).subspan(k * n, n);
}

bool CenteredField::same_shape(const CenteredField& other) const {
    return extent_ == other.extent_ && grid_ == other.grid_;
}

CenteredVectorField make_vector_field(const GridSpec& grid) {
    return CenteredVectorField(grid.dims(), CenteredField(grid, TimeExtent::Full));
}

MomentumField::MomentumField(GridSpec grid) : grid_(std::move(grid)) {
    components_.reserve(grid_.dims());
    for (std::size_t i = 0; i < grid_.dims(); ++i) {
        components_.emplace_back(grid_.faces_per_slice(i) * grid_.time_steps(), 0.0);
    }
}

std::size_t MomentumField::size() const {
    std::size_t total = 0;
    for (const auto& c : components_) total += c.size();
    return total;
}

namespace {

double dot_span(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy_span(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void require(bool ok, const char* what) {
    if (!ok) throw ShapeMismatch(what);
}

}  // namespace

double dot(const CenteredField& a, const CenteredField& b) {
    require(a.same_shape(b), "dot: centered fields differ in shape");
    return dot_span(a.data(), b.data());
}

double dot(const MomentumField& a, const MomentumField& b) {
    require(a.same_shape(b), "dot: momentum fields differ in shape");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dims(); ++i) s += dot_span(a.component(i), b.component(i));
    return s;
}

double dot(const CenteredVectorField& a, const CenteredVectorField& b) {
    require(a.size() == b.size(), "dot: vector fields differ in component count");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += dot(a[i], b[i]);
    return s;
}

double norm(const CenteredField& a) { return std::sqrt(dot(a, a)); }
double norm(const MomentumField& a) { return std::sqrt(dot(a, a)); }
double norm(const CenteredVectorField& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const CenteredField& x, CenteredField& y) {
    require(x.same_shape(y), "axpy: centered fields differ in shape");
    axpy_span(alpha, x.data(), y.data());
}

void axpy(double alpha, const MomentumField& x, MomentumField& y) {
    require(x.same_shape(y), "axpy: momentum fields differ in shape");
    for (std::size_t i = 0; i < x.dims(); ++i) axpy_span(alpha, x.component(i), y.component(i));
}

void axpy(double alpha, const CenteredVectorField& x, CenteredVectorField& y) {
    require(x.size() == y.size(), "axpy: vector fields differ in component count");
    for (std::size_t i = 0; i < x.size(); ++i) axpy(alpha, x[i], y[i]);
}

}  // namespace dynot
