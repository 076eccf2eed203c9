#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dynot/energy.hpp"
#include "oracles.hpp"

using namespace dynot;

namespace {

double prox_objective(std::span<const double> u, double v, std::span<const double> a_m, double a_f, double sigma) {
    double dist = (v - a_f) * (v - a_f);
    for (std::size_t i = 0; i < u.size(); ++i) dist += (u[i] - a_m[i]) * (u[i] - a_m[i]);
    return kinetic_energy_density(u, v) + 0.5 * sigma * dist;
}

}  // namespace

TEST_CASE("kinetic energy density examples") {
    const double one[] = {1.0};
    const double zero[] = {0.0};
    CHECK(kinetic_energy_density(one, 2.0) == 0.25);
    CHECK(kinetic_energy_density(zero, 0.0) == 0.0);
    CHECK(std::isinf(kinetic_energy_density(one, 0.0)));
    CHECK(std::isinf(kinetic_energy_density(zero, -1.0)));
    const double two_d[] = {1.0, 2.0};
    CHECK(kinetic_energy_density(two_d, 5.0) == doctest::Approx(0.5));
}

TEST_CASE("kinetic energy of a field sums the cells") {
    GridSpec grid({{2, Boundary::Neumann}}, 2);
    CenteredPair pair(grid);
    pair.u[0][0] = 1.0;
    pair.v[0] = 2.0;
    pair.v[1] = 1.0;
    pair.u[0][3] = 2.0;
    pair.v[3] = 4.0;
    CHECK(kinetic_energy(pair) == doctest::Approx(0.25 + 0.5));
    pair.v[2] = -1e-3;
    CHECK(std::isinf(kinetic_energy(pair)));
}

TEST_CASE("prox examples") {
    double u = -1.0;
    SUBCASE("zero momentum, positive density") {
        const double a_m[] = {0.0};
        auto r = prox_kinetic(a_m, 1.0, 1.0, {&u, 1});
        CHECK(r.v == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(u == 0.0);
    }
    SUBCASE("clamp") {
        const double a_m[] = {0.0};
        auto r = prox_kinetic(a_m, -1.0, 1.0, {&u, 1});
        CHECK(r.v == 0.0);
        CHECK(u == 0.0);
    }
    SUBCASE("v (1 + v)^2 = 2") {
        const double a_m[] = {2.0};
        auto r = prox_kinetic(a_m, 0.0, 1.0, {&u, 1});
        const double v_ref = oracle::prox_root_bisection(4.0, 0.0, 1.0);
        CHECK(std::abs(r.v - v_ref) <= 1e-12);
        CHECK(std::abs(u - v_ref * 2.0 / (1.0 + v_ref)) <= 1e-12);
        CHECK(std::abs(r.v * (1.0 + r.v) * (1.0 + r.v) - 2.0) <= 1e-12);
        CHECK(r.v == doctest::Approx(0.695621).epsilon(1e-6));
        CHECK(u == doctest::Approx(0.820491).epsilon(1e-6));
    }
}

TEST_CASE("prox residual and clamp branch on random samples") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> a(-10.0, 10.0);
    std::uniform_real_distribution<double> log_sigma(std::log(0.01), std::log(10.0));
    std::size_t clamped = 0;
    for (int i = 0; i < 20000; ++i) {
        const double a_m[] = {a(rng), a(rng)};
        const double a_f = a(rng);
        const double sigma = std::exp(log_sigma(rng));
        double u[2];
        auto r = prox_kinetic(a_m, a_f, sigma, u);
        const double a_m_sq = a_m[0] * a_m[0] + a_m[1] * a_m[1];
        if (r.v == 0.0) {
            ++clamped;
            CHECK(prox_cubic(0.0, a_m_sq, a_f, sigma) >= 0.0);
            CHECK(u[0] == 0.0);
            CHECK(u[1] == 0.0);
        } else {
            const double tol = 1e-10 * std::max(1.0, std::abs(a_f * a_f * a_f) * sigma * sigma);
            CHECK(std::abs(prox_cubic(r.v, a_m_sq, a_f, sigma)) <= tol);
            const double v_ref = oracle::prox_root_bisection(a_m_sq, a_f, sigma);
            CHECK(std::abs(r.v - v_ref) <= 1e-9 * std::max(1.0, v_ref));
        }
    }
    CHECK(clamped > 0);
}

TEST_CASE("prox is the minimizer of its objective") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> a(-3.0, 3.0);
    std::uniform_real_distribution<double> s(0.05, 5.0);
    std::normal_distribution<double> jitter(0.0, 1e-3);
    for (int i = 0; i < 2000; ++i) {
        const double a_m[] = {a(rng)};
        const double a_f = a(rng);
        const double sigma = s(rng);
        double u[1];
        const double v = prox_kinetic(a_m, a_f, sigma, u).v;
        const double best = prox_objective(u, v, a_m, a_f, sigma);

        const double zero[] = {0.0};
        CHECK(best <= prox_objective(zero, 0.0, a_m, a_f, sigma) + 1e-12);
        CHECK(best <= prox_objective(a_m, std::max(a_f, 1e-6), a_m, a_f, sigma) + 1e-12);
        const double u2[] = {u[0] + jitter(rng)};
        const double v2 = std::max(0.0, v + jitter(rng));
        CHECK(best <= prox_objective(u2, v2, a_m, a_f, sigma) + 1e-12);
    }
}

TEST_CASE("prox optimality conditions") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> a(-4.0, 4.0);
    std::uniform_real_distribution<double> c(0.2, 5.0);
    for (int i = 0; i < 2000; ++i) {
        const double scale = c(rng);
        const double a_m[] = {scale * a(rng), scale * a(rng)};
        const double a_f = scale * std::abs(a(rng));
        const double sigma = c(rng);
        double u[2];
        const double v = prox_kinetic(a_m, a_f, sigma, u).v;
        if (v <= 0.0) continue;
        const double u_sq = u[0] * u[0] + u[1] * u[1];
        for (int k = 0; k < 2; ++k) CHECK(std::abs(u[k] / v + sigma * (u[k] - a_m[k])) <= 1e-9 * std::max(1.0, std::abs(a_m[k]) * sigma));
        CHECK(std::abs(-0.5 * u_sq / (v * v) + sigma * (v - a_f)) <= 1e-9 * std::max(1.0, sigma * std::abs(a_f)));
    }
}

TEST_CASE("prox is firmly nonexpansive") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> a(-3.0, 3.0);
    for (int i = 0; i < 5000; ++i) {
        const double sigma = 0.5 + std::abs(a(rng));
        const double x_m[] = {a(rng)};
        const double y_m[] = {a(rng)};
        const double x_f = a(rng);
        const double y_f = a(rng);
        double pu[1];
        double qu[1];
        const double pv = prox_kinetic(x_m, x_f, sigma, pu).v;
        const double qv = prox_kinetic(y_m, y_f, sigma, qu).v;
        const double du = pu[0] - qu[0];
        const double dv = pv - qv;
        const double lhs = du * du + dv * dv;
        const double rhs = du * (x_m[0] - y_m[0]) + dv * (x_f - y_f);
        CHECK(lhs <= rhs + 1e-10 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("energy is convex and strictly so off the rays") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> uu(-2.0, 2.0);
    std::uniform_real_distribution<double> vv(0.1, 3.0);
    std::uniform_real_distribution<double> lam(0.05, 0.95);
    for (int i = 0; i < 5000; ++i) {
        const double u1[] = {uu(rng)};
        const double u2[] = {uu(rng)};
        const double v1 = vv(rng);
        const double v2 = vv(rng);
        const double l = lam(rng);
        const double um[] = {l * u1[0] + (1 - l) * u2[0]};
        const double mixed = kinetic_energy_density(um, l * v1 + (1 - l) * v2);
        const double chord = l * kinetic_energy_density(u1, v1) + (1 - l) * kinetic_energy_density(u2, v2);
        CHECK(mixed <= chord + 1e-14);
        if (std::abs(u1[0] / v1 - u2[0] / v2) > 1e-3) CHECK(mixed < chord);
    }
    // Along a ray the energy is linear.
    const double u1[] = {1.0};
    const double u2[] = {3.0};
    const double um[] = {2.0};
    CHECK(kinetic_energy_density(um, 2.0) == doctest::Approx(0.5 * (kinetic_energy_density(u1, 1.0) + kinetic_energy_density(u2, 3.0))));
}

TEST_CASE("prox over a field agrees with the cell prox") {
    GridSpec grid({{4, Boundary::Neumann}, {3, Boundary::Periodic}}, 3);
    std::mt19937_64 rng(47);
    CenteredPair in(grid);
    oracle::fill_random(in.u, rng);
    oracle::fill_random(in.v, rng);
    const double sigma = 0.7;
    CenteredPair out = prox_kinetic_field(in, sigma);
    for (std::size_t c = 0; c < in.v.size(); ++c) {
        const double a_m[] = {in.u[0][c], in.u[1][c]};
        double u[2];
        const double v = prox_kinetic(a_m, in.v[c], sigma, u).v;
        CHECK(out.v[c] == v);
        CHECK(out.u[0][c] == u[0]);
        CHECK(out.u[1][c] == u[1]);
    }
    CenteredPair zero = prox_kinetic_field(CenteredPair(grid), sigma);
    CHECK(norm(zero.u) == 0.0);
    CHECK(norm(zero.v) == 0.0);
}
