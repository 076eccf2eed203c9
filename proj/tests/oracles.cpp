#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace oracle {

using dynot::Boundary;
using Eigen::MatrixXd;

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
    MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

// S_n in R^{(n-1) x n}: rows (1/2)(e_j + e_{j+1}).
MatrixXd bidiagonal_average(std::size_t rows, std::size_t cols) {
    MatrixXd s = MatrixXd::Zero(rows, cols);
    for (std::size_t j = 0; j < rows; ++j) {
        s(j, j) = 0.5;
        s(j, j + 1) = 0.5;
    }
    return s;
}

// D_n in R^{(n-1) x n}: rows scale * (-e_j + e_{j+1}).
MatrixXd bidiagonal_difference(std::size_t rows, std::size_t cols, double scale) {
    MatrixXd d = MatrixXd::Zero(rows, cols);
    for (std::size_t j = 0; j < rows; ++j) {
        d(j, j) = -scale;
        d(j, j + 1) = scale;
    }
    return d;
}

// Circulant forms: row 0 couples the first and last entries.
MatrixXd periodic_average(std::size_t n) {
    MatrixXd s = MatrixXd::Zero(n, n);
    s(0, 0) = 0.5;
    s(0, n - 1) += 0.5;
    for (std::size_t j = 1; j < n; ++j) {
        s(j, j - 1) += 0.5;
        s(j, j) += 0.5;
    }
    return s;
}

MatrixXd periodic_difference(std::size_t n) {
    const double nd = static_cast<double>(n);
    MatrixXd d = MatrixXd::Zero(n, n);
    d(0, 0) = -nd;
    d(0, n - 1) += nd;
    for (std::size_t j = 1; j < n; ++j) {
        d(j, j - 1) += nd;
        d(j, j) += -nd;
    }
    return d;
}

MatrixXd identity(std::size_t n) { return MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)); }

// Kronecker product over the spatial axes (slowest first) with `op` on axis `target`.
MatrixXd spatial_kron(const dynot::GridSpec& grid, std::size_t target, const MatrixXd& op) {
    MatrixXd out = MatrixXd::Identity(1, 1);
    for (std::size_t a = grid.dims(); a-- > 0;) {
        out = kron(out, a == target ? op : identity(grid.axis(a).size));
    }
    return out;
}

}  // namespace

MatrixXd face_average(std::size_t n, Boundary bc) {
    return bc == Boundary::Neumann ? MatrixXd(bidiagonal_average(n - 1, n).transpose())
                                   : MatrixXd(periodic_average(n).transpose());
}

MatrixXd face_divergence(std::size_t n, Boundary bc) {
    return bc == Boundary::Neumann
               ? MatrixXd(-bidiagonal_difference(n - 1, n, static_cast<double>(n)).transpose())
               : MatrixXd(periodic_difference(n).transpose());
}

MatrixXd time_average(std::size_t p) { return bidiagonal_average(p - 1, p).transpose(); }

MatrixXd time_difference(std::size_t p) {
    return -bidiagonal_difference(p - 1, p, static_cast<double>(p)).transpose();
}

DenseOperators assemble(const dynot::GridSpec& grid) {
    const std::size_t d = grid.dims();
    const std::size_t p = grid.time_steps();
    const auto cells = static_cast<Eigen::Index>(grid.cells_per_slice() * p);

    std::vector<MatrixXd> avg;
    std::vector<MatrixXd> div;
    Eigen::Index faces = 0;
    for (std::size_t i = 0; i < d; ++i) {
        const auto& ax = grid.axis(i);
        avg.push_back(kron(identity(p), spatial_kron(grid, i, face_average(ax.size, ax.bc))));
        div.push_back(kron(identity(p), spatial_kron(grid, i, face_divergence(ax.size, ax.bc))));
        faces += avg.back().cols();
    }

    DenseOperators ops;
    ops.interp_momentum = MatrixXd::Zero(cells * static_cast<Eigen::Index>(d), faces);
    ops.div_momentum = MatrixXd::Zero(cells, faces);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < d; ++i) {
        ops.interp_momentum.block(cells * static_cast<Eigen::Index>(i), col, cells, avg[i].cols()) = avg[i];
        ops.div_momentum.block(0, col, cells, div[i].cols()) = div[i];
        col += avg[i].cols();
    }
    const MatrixXd id_space = identity(grid.cells_per_slice());
    ops.interp_density = kron(time_average(p), id_space);
    ops.diff_density = kron(time_difference(p), id_space);
    ops.continuity.resize(cells, faces + ops.diff_density.cols());
    ops.continuity << ops.div_momentum, ops.diff_density;
    return ops;
}

MatrixXd symmetric_pinv(const MatrixXd& m, double rel_threshold) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double cutoff = rel_threshold * lambda.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (std::abs(lambda(i)) > cutoff) inv(i) = 1.0 / lambda(i);
    }
    return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::VectorXd flatten(const dynot::MomentumField& m) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(m.size()));
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < m.dims(); ++i) {
        for (double x : m.component(i)) out(k++) = x;
    }
    return out;
}

Eigen::VectorXd flatten(const dynot::CenteredField& f) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) out(static_cast<Eigen::Index>(i)) = f[i];
    return out;
}

Eigen::VectorXd flatten(const dynot::CenteredVectorField& w) {
    std::size_t total = 0;
    for (const auto& c : w) total += c.size();
    Eigen::VectorXd out(static_cast<Eigen::Index>(total));
    Eigen::Index k = 0;
    for (const auto& c : w) {
        for (std::size_t i = 0; i < c.size(); ++i) out(k++) = c[i];
    }
    return out;
}

void unflatten(const Eigen::VectorXd& x, dynot::MomentumField& m) {
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < m.dims(); ++i) {
        for (double& v : m.component(i)) v = x(k++);
    }
}

MatrixXd dct2_matrix(std::size_t p) {
    const double pd = static_cast<double>(p);
    MatrixXd c(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        const double eps = j == 0 ? 1.0 / std::sqrt(2.0) : 1.0;
        for (std::size_t k = 0; k < p; ++k) {
            c(j, k) = std::sqrt(2.0 / pd) * eps *
                      std::cos(static_cast<double>(j * (2 * k + 1)) * std::numbers::pi / (2.0 * pd));
        }
    }
    return c;
}

Eigen::MatrixXcd dft_matrix(std::size_t n) {
    Eigen::MatrixXcd f(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            f(j, k) = std::polar(1.0, angle);
        }
    }
    return f;
}

double prox_root_bisection(double a_m_sq, double a_f, double sigma, double tol) {
    auto g = [&](double v) { return 2.0 * (1.0 + sigma * v) * (1.0 + sigma * v) * (v - a_f) - sigma * a_m_sq; };
    if (g(0.0) >= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (g(hi) < 0.0) hi *= 2.0;
    while (hi - lo > tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

LineTransport line_transport(const std::vector<double>& f0, const std::vector<double>& f1, double t) {
    const std::size_t n = f0.size();
    const double nd = static_cast<double>(n);
    LineTransport out;
    out.frame.assign(n, 0.0);
    std::vector<double> left0 = f0;
    std::vector<double> left1 = f1;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n && j < n) {
        if (left0[i] <= 0.0) { ++i; continue; }
        if (left1[j] <= 0.0) { ++j; continue; }
        const double w = std::min(left0[i], left1[j]);
        const double dx = (static_cast<double>(j) - static_cast<double>(i)) / nd;
        out.w2_squared += w * dx * dx;
        const double s = (1.0 - t) * static_cast<double>(i) + t * static_cast<double>(j);
        const double lo = std::floor(s);
        const double frac = s - lo;
        const auto k = static_cast<std::size_t>(lo);
        out.frame[k] += w * (1.0 - frac);
        if (frac > 0.0) out.frame[k + 1] += w * frac;
        left0[i] -= w;
        left1[j] -= w;
        // Snap tiny remainders left by subtraction to zero.
        if (left0[i] <= 1e-15 * w) left0[i] = 0.0;
        if (left1[j] <= 1e-15 * w) left1[j] = 0.0;
    }
    return out;
}

CircleTransport circle_transport(const std::vector<double>& h0, const std::vector<double>& h1, double t) {
    const std::size_t b = h0.size();
    CircleTransport best;
    best.w2_squared = std::numeric_limits<double>::infinity();
    for (std::size_t cut = 0; cut < b; ++cut) {
        std::vector<double> g0(b);
        std::vector<double> g1(b);
        for (std::size_t k = 0; k < b; ++k) {
            g0[k] = h0[(cut + k) % b];
            g1[k] = h1[(cut + k) % b];
        }
        LineTransport line = line_transport(g0, g1, t);
        if (line.w2_squared < best.w2_squared) {
            best.w2_squared = line.w2_squared;
            best.cut = cut;
            best.frame.assign(b, 0.0);
            for (std::size_t k = 0; k < b; ++k) best.frame[(cut + k) % b] = line.frame[k];
        }
    }
    return best;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(n);
    for (double& x : out) x = dist(rng);
    return out;
}

void fill_random(dynot::CenteredField& f, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& x : f.data()) x = dist(rng);
}

void fill_random(dynot::MomentumField& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t i = 0; i < m.dims(); ++i) {
        for (double& x : m.component(i)) x = dist(rng);
    }
}

void fill_random(dynot::CenteredVectorField& w, std::mt19937_64& rng) {
    for (auto& c : w) fill_random(c, rng);
}

std::vector<dynot::GridSpec> all_bc_grids(const std::vector<std::size_t>& sizes, std::size_t p) {
    std::vector<dynot::GridSpec> out;
    const std::size_t combos = std::size_t{1} << sizes.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
        std::vector<dynot::AxisSpec> axes;
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            axes.push_back({sizes[i], (mask >> i) & 1 ? Boundary::Periodic : Boundary::Neumann});
        }
        out.emplace_back(std::move(axes), p);
    }
    return out;
}

std::vector<double> gaussian_1d(std::size_t n, double center, double stddev, double floor) {
    std::vector<double> g(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double z = (static_cast<double>(j) - center) / stddev;
        g[j] = std::exp(-0.5 * z * z) + floor;
        total += g[j];
    }
    for (double& x : g) x /= total;
    return g;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
    return out;
}

double max_abs(const std::vector<double>& a) {
    double out = 0.0;
    for (double x : a) out = std::max(out, std::abs(x));
    return out;
}

}  // namespace oracle
