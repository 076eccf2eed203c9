#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "dynot/grid.hpp"

namespace dynot {

enum class TransformKind {
    CosineII,  // orthonormal DCT-II; diagonalizes the Neumann second difference
    Fourier,   // unnormalized DFT; diagonalizes the periodic second difference
};

/**
 * A planned 1D transform of fixed length, applied along one axis of a dense
 * tensor (axis 0 fastest). Plans are immutable once built and may be shared
 * between threads; every application allocates its own line buffers.
 */
class AxisTransform {
public:
    AxisTransform(TransformKind kind, std::size_t length);
    ~AxisTransform();
    AxisTransform(const AxisTransform&) = delete;
    AxisTransform& operator=(const AxisTransform&) = delete;

    TransformKind kind() const { return kind_; }
    std::size_t length() const { return length_; }

    // CosineII only. forward: y = C x, backward: x = C^T y.
    void forward(std::span<double> data, std::span<const std::size_t> shape, std::size_t axis) const;
    void backward(std::span<double> data, std::span<const std::size_t> shape,
                  std::size_t axis) const;

    // Fourier only. forward: y_j = sum_k x_k exp(-2 pi i jk/n); backward carries 1/n.
    void forward(std::span<std::complex<double>> data, std::span<const std::size_t> shape,
                 std::size_t axis) const;
    void backward(std::span<std::complex<double>> data, std::span<const std::size_t> shape,
                  std::size_t axis) const;

private:
    struct Plans;
    TransformKind kind_;
    std::size_t length_;
    std::unique_ptr<Plans> plans_;
};

// One-shot conveniences that plan, apply and discard.
void cosine2_axis(std::span<double> data, std::span<const std::size_t> shape, std::size_t axis);
void cosine3_axis(std::span<double> data, std::span<const std::size_t> shape, std::size_t axis);
void fourier_axis(std::span<std::complex<double>> data, std::span<const std::size_t> shape,
                  std::size_t axis);
void inverse_fourier_axis(std::span<std::complex<double>> data,
                          std::span<const std::size_t> shape, std::size_t axis);

/// Eigenvalue of the 1D second difference (unit spacing) for mode j.
double neumann_symbol(std::size_t j, std::size_t n);   // 4 sin^2(j pi / 2n)
double periodic_symbol(std::size_t j, std::size_t n);  // 4 sin^2(j pi / n)

/**
 * Spectral factorization of A A^T, where A is the space-time continuity
 * operator of a grid. Time and Neumann axes are diagonalized by DCT-II,
 * periodic axes by the DFT; the eigenvalue of mode (j_1..j_d, k) is
 * p^2 q_p(k) + sum_i n_i^2 q_i(j_i).
 */
class SpectralPlan {
public:
    /// Relative threshold under which an eigenvalue counts as zero.
    static constexpr double kZeroThreshold = 1e-12;

    explicit SpectralPlan(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> eigenvalues() const { return eigenvalues_; }
    std::span<const double> inv_eigenvalues() const { return inv_eigenvalues_; }

    /// Transform applied along spatial axis i (index d is time).
    TransformKind schedule(std::size_t axis) const { return transforms_[axis]->kind(); }

    /// (A A^T)^+ w. The constant mode is annihilated.
    CenteredField apply_pseudo_inverse(const CenteredField& w) const;

private:
    GridSpec grid_;
    std::vector<std::size_t> shape_;  // spatial shape followed by p
    std::vector<double> eigenvalues_;
    std::vector<double> inv_eigenvalues_;
    std::vector<std::shared_ptr<const AxisTransform>> transforms_;
    bool any_periodic_ = false;
};

SpectralPlan build_poisson_plan(const GridSpec& grid);

}  // namespace dynot
