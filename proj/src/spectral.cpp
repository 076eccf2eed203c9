#include "dynot/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "dynot/errors.hpp"

namespace dynot {

namespace {

// The FFTW planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct LineLayout {
    std::size_t inner;
    std::size_t n;
    std::size_t outer;
};

LineLayout line_layout(std::span<const std::size_t> shape, std::size_t axis, std::size_t total) {
    if (axis >= shape.size()) throw ShapeMismatch("transform axis out of range");
    std::size_t inner = 1;
    std::size_t count = 1;
    for (std::size_t a = 0; a < shape.size(); ++a) {
        if (a < axis) inner *= shape[a];
        count *= shape[a];
    }
    if (count != total) {
        throw ShapeMismatch("tensor has " + std::to_string(total) + " entries, shape implies " +
                            std::to_string(count));
    }
    return {inner, shape[axis], count / (inner * shape[axis])};
}

// Calls fn(line) on a contiguous copy of every line along the axis and
// scatters the result back.
template <typename T, typename Fn>
void for_each_line(std::span<T> data, std::span<const std::size_t> shape, std::size_t axis,
                   std::size_t expected_length, Fn&& fn) {
    const LineLayout l = line_layout(shape, axis, data.size());
    if (l.n != expected_length) {
        throw ShapeMismatch("axis length " + std::to_string(l.n) + " does not match planned length " +
                            std::to_string(expected_length));
    }
    std::vector<T> line(l.n);
    for (std::size_t o = 0; o < l.outer; ++o) {
        T* block = data.data() + o * l.n * l.inner;
        for (std::size_t k = 0; k < l.inner; ++k) {
            for (std::size_t j = 0; j < l.n; ++j) line[j] = block[j * l.inner + k];
            fn(line.data());
            for (std::size_t j = 0; j < l.n; ++j) block[j * l.inner + k] = line[j];
        }
    }
}

}  // namespace

struct AxisTransform::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

AxisTransform::AxisTransform(TransformKind kind, std::size_t length)
    : kind_(kind), length_(length), plans_(std::make_unique<Plans>()) {
    if (length == 0) throw ShapeMismatch("transform length must be positive");
    const int n = static_cast<int>(length);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    if (kind == TransformKind::CosineII) {
        std::vector<double> buf(length);
        plans_->forward = fftw_plan_r2r_1d(n, buf.data(), buf.data(), FFTW_REDFT10, flags);
        plans_->backward = fftw_plan_r2r_1d(n, buf.data(), buf.data(), FFTW_REDFT01, flags);
    } else {
        std::vector<std::complex<double>> buf(length);
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        plans_->forward = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, flags);
        plans_->backward = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, flags);
    }
    if (plans_->forward == nullptr || plans_->backward == nullptr) {
        throw Error("FFTW failed to create a plan of length " + std::to_string(length));
    }
}

AxisTransform::~AxisTransform() {
    std::lock_guard lock(planner_mutex());
    if (plans_->forward) fftw_destroy_plan(plans_->forward);
    if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

void AxisTransform::forward(std::span<double> data, std::span<const std::size_t> shape,
                            std::size_t axis) const {
    if (kind_ != TransformKind::CosineII) throw Error("real forward transform needs a cosine plan");
    // FFTW's REDFT10 is 2*sum x_j cos(pi k (j+1/2)/n); rescale rows to the
    // orthonormal DCT-II with the 1/sqrt(2) weight on the first row.
    const double n = static_cast<double>(length_);
    const double s0 = 1.0 / (2.0 * std::sqrt(n));
    const double sk = 1.0 / std::sqrt(2.0 * n);
    for_each_line(data, shape, axis, length_, [&](double* line) {
        fftw_execute_r2r(plans_->forward, line, line);
        line[0] *= s0;
        for (std::size_t k = 1; k < length_; ++k) line[k] *= sk;
    });
}

void AxisTransform::backward(std::span<double> data, std::span<const std::size_t> shape,
                             std::size_t axis) const {
    if (kind_ != TransformKind::CosineII) throw Error("real backward transform needs a cosine plan");
    // REDFT01 is y_0 + 2*sum_{k>0} y_k cos(pi k (j+1/2)/n); pre-scaling gives C^T y.
    const double n = static_cast<double>(length_);
    const double s0 = 1.0 / std::sqrt(n);
    const double sk = 1.0 / std::sqrt(2.0 * n);
    for_each_line(data, shape, axis, length_, [&](double* line) {
        line[0] *= s0;
        for (std::size_t k = 1; k < length_; ++k) line[k] *= sk;
        fftw_execute_r2r(plans_->backward, line, line);
    });
}

void AxisTransform::forward(std::span<std::complex<double>> data,
                            std::span<const std::size_t> shape, std::size_t axis) const {
    if (kind_ != TransformKind::Fourier) throw Error("complex forward transform needs a Fourier plan");
    for_each_line(data, shape, axis, length_, [&](std::complex<double>* line) {
        auto* p = reinterpret_cast<fftw_complex*>(line);
        fftw_execute_dft(plans_->forward, p, p);
    });
}

void AxisTransform::backward(std::span<std::complex<double>> data,
                             std::span<const std::size_t> shape, std::size_t axis) const {
    if (kind_ != TransformKind::Fourier) throw Error("complex backward transform needs a Fourier plan");
    const double scale = 1.0 / static_cast<double>(length_);
    for_each_line(data, shape, axis, length_, [&](std::complex<double>* line) {
        auto* p = reinterpret_cast<fftw_complex*>(line);
        fftw_execute_dft(plans_->backward, p, p);
        for (std::size_t k = 0; k < length_; ++k) line[k] *= scale;
    });
}

void cosine2_axis(std::span<double> data, std::span<const std::size_t> shape, std::size_t axis) {
    if (axis >= shape.size()) throw ShapeMismatch("transform axis out of range");
    AxisTransform(TransformKind::CosineII, shape[axis]).forward(data, shape, axis);
}

void cosine3_axis(std::span<double> data, std::span<const std::size_t> shape, std::size_t axis) {
    if (axis >= shape.size()) throw ShapeMismatch("transform axis out of range");
    AxisTransform(TransformKind::CosineII, shape[axis]).backward(data, shape, axis);
}

void fourier_axis(std::span<std::complex<double>> data, std::span<const std::size_t> shape,
                  std::size_t axis) {
    if (axis >= shape.size()) throw ShapeMismatch("transform axis out of range");
    AxisTransform(TransformKind::Fourier, shape[axis]).forward(data, shape, axis);
}

void inverse_fourier_axis(std::span<std::complex<double>> data,
                          std::span<const std::size_t> shape, std::size_t axis) {
    if (axis >= shape.size()) throw ShapeMismatch("transform axis out of range");
    AxisTransform(TransformKind::Fourier, shape[axis]).backward(data, shape, axis);
}

double neumann_symbol(std::size_t j, std::size_t n) {
    const double s = std::sin(static_cast<double>(j) * std::numbers::pi / (2.0 * static_cast<double>(n)));
    return 4.0 * s * s;
}

double periodic_symbol(std::size_t j, std::size_t n) {
    const double s = std::sin(static_cast<double>(j) * std::numbers::pi / static_cast<double>(n));
    return 4.0 * s * s;
}

SpectralPlan::SpectralPlan(const GridSpec& grid) : grid_(grid) {
    const std::size_t d = grid.dims();
    const std::size_t p = grid.time_steps();
    shape_ = grid.cell_shape();
    shape_.push_back(p);

    std::vector<std::vector<double>> symbols(d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        const AxisSpec& a = grid.axis(i);
        const double n2 = static_cast<double>(a.size) * static_cast<double>(a.size);
        const bool periodic = a.bc == Boundary::Periodic;
        any_periodic_ = any_periodic_ || periodic;
        transforms_.push_back(std::make_shared<const AxisTransform>(
            periodic ? TransformKind::Fourier : TransformKind::CosineII, a.size));
        for (std::size_t j = 0; j < a.size; ++j) {
            symbols[i].push_back(n2 * (periodic ? periodic_symbol(j, a.size) : neumann_symbol(j, a.size)));
        }
    }
    transforms_.push_back(std::make_shared<const AxisTransform>(TransformKind::CosineII, p));
    const double p2 = static_cast<double>(p) * static_cast<double>(p);
    for (std::size_t k = 0; k < p; ++k) symbols[d].push_back(p2 * neumann_symbol(k, p));

    const std::size_t total = grid.cells_per_slice() * p;
    eigenvalues_.assign(total, 0.0);
    std::vector<std::size_t> index(d + 1, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double lambda = 0.0;
        for (std::size_t a = 0; a <= d; ++a) lambda += symbols[a][index[a]];
        eigenvalues_[flat] = lambda;
        for (std::size_t a = 0; a <= d; ++a) {
            if (++index[a] < shape_[a]) break;
            index[a] = 0;
        }
    }

    const double threshold = kZeroThreshold * *std::max_element(eigenvalues_.begin(), eigenvalues_.end());
    inv_eigenvalues_.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        inv_eigenvalues_[i] = eigenvalues_[i] > threshold ? 1.0 / eigenvalues_[i] : 0.0;
    }
}

CenteredField SpectralPlan::apply_pseudo_inverse(const CenteredField& w) const {
    if (w.grid() != grid_ || w.extent() != TimeExtent::Full) {
        throw ShapeMismatch("pseudo-inverse input does not match the plan's grid");
    }
    std::vector<double> work(w.data().begin(), w.data().end());
    const std::size_t axes = shape_.size();

    for (std::size_t a = 0; a < axes; ++a) {
        if (transforms_[a]->kind() == TransformKind::CosineII) transforms_[a]->forward(std::span(work), shape_, a);
    }

    if (!any_periodic_) {
        for (std::size_t i = 0; i < work.size(); ++i) work[i] *= inv_eigenvalues_[i];
    } else {
        std::vector<std::complex<double>> spectrum(work.begin(), work.end());
        for (std::size_t a = 0; a < axes; ++a) {
            if (transforms_[a]->kind() == TransformKind::Fourier) transforms_[a]->forward(std::span(spectrum), shape_, a);
        }
        for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= inv_eigenvalues_[i];
        for (std::size_t a = 0; a < axes; ++a) {
            if (transforms_[a]->kind() == TransformKind::Fourier) transforms_[a]->backward(std::span(spectrum), shape_, a);
        }
        // The multiplier is even in every periodic frequency, so the
        // imaginary part is rounding noise.
        for (std::size_t i = 0; i < work.size(); ++i) work[i] = spectrum[i].real();
    }

    for (std::size_t a = 0; a < axes; ++a) {
        if (transforms_[a]->kind() == TransformKind::CosineII) transforms_[a]->backward(std::span(work), shape_, a);
    }
    return CenteredField(grid_, TimeExtent::Full, std::move(work));
}

SpectralPlan build_poisson_plan(const GridSpec& grid) { return SpectralPlan(grid); }

}  // namespace dynot
