#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Nothing here calls into the stencil or spectral code of the library.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "dynot/grid.hpp"

namespace oracle {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// 1D building blocks written out entry by entry from their matrix form.
Eigen::MatrixXd face_average(std::size_t n, dynot::Boundary bc);     // cells x faces
Eigen::MatrixXd face_divergence(std::size_t n, dynot::Boundary bc);  // cells x faces
Eigen::MatrixXd time_average(std::size_t p);                          // p x (p-1)
Eigen::MatrixXd time_difference(std::size_t p);                       // p x (p-1)

struct DenseOperators {
    Eigen::MatrixXd interp_momentum;  // d*N*p x faces
    Eigen::MatrixXd interp_density;   // N*p x N*(p-1)
    Eigen::MatrixXd div_momentum;     // N*p x faces
    Eigen::MatrixXd diff_density;     // N*p x N*(p-1)
    Eigen::MatrixXd continuity;       // [div_momentum | diff_density]
};

DenseOperators assemble(const dynot::GridSpec& grid);

/// Moore-Penrose pseudo-inverse of a symmetric matrix via its eigendecomposition.
Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd& m, double rel_threshold = 1e-10);

Eigen::VectorXd flatten(const dynot::MomentumField& m);
Eigen::VectorXd flatten(const dynot::CenteredField& f);
Eigen::VectorXd flatten(const dynot::CenteredVectorField& w);
void unflatten(const Eigen::VectorXd& x, dynot::MomentumField& m);

/// Orthonormal DCT-II matrix with the 1/sqrt(2) first-row weight.
Eigen::MatrixXd dct2_matrix(std::size_t p);
/// Unnormalized DFT matrix exp(-2 pi i jk / n).
Eigen::MatrixXcd dft_matrix(std::size_t n);

/// Largest root of 2(1 + s v)^2 (v - a_f) - s |a_m|^2 by bisection, or 0 if it is not positive.
double prox_root_bisection(double a_m_sq, double a_f, double sigma, double tol = 1e-12);

/// Exact transport between two 1D histograms on cell midpoints of [0,1) by
/// matching equal-mass pieces in order. `frame_at` receives the interpolant
/// at time t (mass split linearly between neighbouring midpoints).
struct LineTransport {
    double w2_squared = 0.0;
    std::vector<double> frame;
};
LineTransport line_transport(const std::vector<double>& f0, const std::vector<double>& f1, double t);

/// Transport on the circle by trying every cut position: both histograms are
/// unrolled at bin c, matched on the line, and the cheapest cut wins.
struct CircleTransport {
    double w2_squared = 0.0;
    std::size_t cut = 0;
    std::vector<double> frame;  // interpolant at t, rolled back onto the circle
};
CircleTransport circle_transport(const std::vector<double>& h0, const std::vector<double>& h1, double t);

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0);
void fill_random(dynot::CenteredField& f, std::mt19937_64& rng);
void fill_random(dynot::MomentumField& m, std::mt19937_64& rng);
void fill_random(dynot::CenteredVectorField& w, std::mt19937_64& rng);

/// Every grid with the given axis sizes and every combination of boundary conditions.
std::vector<dynot::GridSpec> all_bc_grids(const std::vector<std::size_t>& sizes, std::size_t p);

/// Normalized Gaussian bump on n cells centred at cell `center` (cell units).
std::vector<double> gaussian_1d(std::size_t n, double center, double stddev, double floor = 0.0);

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);
double max_abs(const std::vector<double>& a);

}  // namespace oracle
