#include "dynot/energy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dynot/errors.hpp"

namespace dynot {

namespace {

constexpr int kMaxNewton = 50;
constexpr int kMaxBisection = 400;
constexpr double kResidualTol = 1e-10;

double cubic_slope(double v, double a_f, double sigma) {
    const double w = 1.0 + sigma * v;
    return 4.0 * sigma * w * (v - a_f) + 2.0 * w * w;
}

// Magnitude of the terms of the cubic at v, used to make the residual
// tolerance scale-aware.
double cubic_scale(double v, double a_m_sq, double a_f, double sigma) {
    const double w = 1.0 + sigma * v;
    return std::max(1.0, 2.0 * w * w * (std::abs(v) + std::abs(a_f)) + sigma * a_m_sq);
}

}  // namespace

double kinetic_energy_density(std::span<const double> u, double v) {
    double u_sq = 0.0;
    for (double x : u) u_sq += x * x;
    if (v > 0.0) return u_sq / (2.0 * v);
    if (v == 0.0 && u_sq == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
}

double kinetic_energy(const CenteredPair& pair) {
    const std::size_t d = pair.u.size();
    const std::size_t cells = pair.v.size();
    for (const auto& c : pair.u) {
        if (c.size() != cells) throw ShapeMismatch("energy: u and v differ in size");
    }
    std::vector<double> u(d);
    double total = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        for (std::size_t i = 0; i < d; ++i) u[i] = pair.u[i][c];
        total += kinetic_energy_density(u, pair.v[c]);
    }
    return total;
}

double prox_cubic(double v, double a_m_sq, double a_f, double sigma) {
    const double w = 1.0 + sigma * v;
    return 2.0 * w * w * (v - a_f) - sigma * a_m_sq;
}

ProxResult prox_kinetic(std::span<const double> a_m, double a_f, double sigma,
                        std::span<double> u_out) {
    if (!(sigma > 0.0)) throw InvalidParams("prox weight sigma must be positive");
    if (u_out.size() != a_m.size()) throw ShapeMismatch("prox: u_out and a_m differ in length");

    double a_m_sq = 0.0;
    for (double x : a_m) a_m_sq += x * x;
    if (!std::isfinite(a_m_sq) || !std::isfinite(a_f)) {
        throw NonConvergence("prox input is not finite");
    }

    ProxResult result;
    // The cubic is increasing and convex to the right of its largest root,
    // so a nonnegative value at 0 means that root is <= 0.
    if (prox_cubic(0.0, a_m_sq, a_f, sigma) >= 0.0) {
        for (double& x : u_out) x = 0.0;
        return result;
    }

    const double v0 = std::max(a_f, 0.0) + 0.5 * sigma * a_m_sq + 1.0;
    double v = v0;
    for (int it = 0; it < kMaxNewton; ++it) {
        const double fv = prox_cubic(v, a_m_sq, a_f, sigma);
        result.newton_iterations = it + 1;
        if (fv <= 0.0) break;
        const double step = fv / cubic_slope(v, a_f, sigma);
        const double next = v - step;
        if (!(next < v)) break;
        v = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * v) break;
    }

    auto converged = [&](double x) {
        return x > 0.0 && std::abs(prox_cubic(x, a_m_sq, a_f, sigma)) <=
                              kResidualTol * cubic_scale(x, a_m_sq, a_f, sigma);
    };

    if (!converged(v)) {
        result.used_bisection = true;
        double lo = 0.0;
        double hi = v0;
        for (int it = 0; it < kMaxBisection && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (prox_cubic(mid, a_m_sq, a_f, sigma) > 0.0 ? hi : lo) = mid;
        }
        v = hi;
        if (!converged(v)) {
            throw NonConvergence("prox root finder failed: a_f=" + std::to_string(a_f) +
                                 " |a_m|^2=" + std::to_string(a_m_sq) +
                                 " sigma=" + std::to_string(sigma));
        }
    }

    result.v = v;
    const double factor = sigma * v / (1.0 + sigma * v);
    for (std::size_t i = 0; i < a_m.size(); ++i) u_out[i] = factor * a_m[i];
    return result;
}

CenteredPair prox_kinetic_field(const CenteredPair& in, double sigma) {
    const std::size_t d = in.u.size();
    const std::size_t cells = in.v.size();
    for (const auto& c : in.u) {
        if (c.size() != cells) throw ShapeMismatch("prox field: u and v differ in size");
    }
    CenteredPair out(in.v.grid());
    std::vector<double> a(d);
    std::vector<double> u(d);
    for (std::size_t c = 0; c < cells; ++c) {
        for (std::size_t i = 0; i < d; ++i) a[i] = in.u[i][c];
        try {
            out.v[c] = prox_kinetic(a, in.v[c], sigma, u).v;
        } catch (const NonConvergence& e) {
            throw NonConvergence("cell " + std::to_string(c) + ": " + e.what());
        }
        for (std::size_t i = 0; i < d; ++i) out.u[i][c] = u[i];
    }
    return out;
}

}  // namespace dynot
