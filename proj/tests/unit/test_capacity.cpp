#include <doctest.h>

#include "philab/capacity.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace philab;
using doctest::Approx;

namespace {

const Box kD{-1, -1, 1, 1};

DomainMask disk(double r, int n, Point c = {0, 0}) { return rasterize(Shape::disk(c, r), n, n, kD); }
DomainMask closed_disk(double r, int n, Point c = {0, 0}) { return rasterize(Shape::closed_disk(c, r), n, n, kD); }

// min over u(a) = 1, u(b) = 0 of pi int_a^b u'^2 r dr, by P1 elements in r.
double radial_condenser(double a, double b, int elements) {
    // the 1D minimizer solves (r u')' = 0; assemble and solve the tridiagonal system
    const int n = elements;
    const double h = (b - a) / n;
    std::vector<double> diag(n + 1, 0.0), off(n, 0.0);
    for (int e = 0; e < n; ++e) {
        const double rm = a + (e + 0.5) * h;
        const double k = rm / h;
        diag[e] += k;
        diag[e + 1] += k;
        off[e] -= k;
    }
    // unknowns 1..n-1 with u0 = 1, un = 0
    std::vector<double> rhs(n + 1, 0.0), c(n + 1), d(n + 1), u(n + 1, 0.0);
    rhs[1] = -off[0] * 1.0;
    for (int i = 1; i < n; ++i) {
        const double lower = i > 1 ? off[i - 1] : 0.0;
        const double m = diag[i] - (i > 1 ? lower * c[i - 1] : 0.0);
        c[i] = off[i] / m;
        d[i] = (rhs[i] - (i > 1 ? lower * d[i - 1] : 0.0)) / m;
    }
    u[0] = 1;
    for (int i = n - 1; i >= 1; --i) u[i] = d[i] - (i < n - 1 ? c[i] * u[i + 1] : 0.0);
    double e = 0;
    for (int k = 0; k < n; ++k) {
        const double rm = a + (k + 0.5) * h;
        const double du = (u[k + 1] - u[k]) / h;
        e += std::numbers::pi * du * du * rm * h;
    }
    return e;
}

} // namespace

TEST_CASE("radial oracle reproduces the logarithmic law") {
    CHECK(radial_condenser(0.1, 0.4, 4000) == Approx(std::numbers::pi / std::log(4.0)).epsilon(1e-5));
}

TEST_CASE("empty obstacle has zero capacity") {
    const auto y = YoungFunction::power(3);
    const DomainMask none(32, 32, kD);
    CHECK(relative_capacity({none, disk(0.8, 32), y, CapacityMode::relative}).capacity == 0);
    CHECK(sobolev_capacity({none, DomainMask(32, 32, kD, true), y, CapacityMode::sobolev}).capacity == 0);
}

TEST_CASE("p = 2 condenser") {
    const auto y = YoungFunction::power(2);
    const auto r = relative_capacity({closed_disk(0.1, 256), disk(0.4, 256), y, CapacityMode::relative});
    const double oracle = radial_condenser(0.1, 0.4, 4000);
    CHECK(std::abs(r.capacity / oracle - 1) <= 0.05);
    CHECK_FALSE(r.touches_boundary);
    for (double v : r.potential.values) {
        CHECK(v >= 0);
        CHECK(v <= 1 + 1e-8);
    }
    // R/r halved: the capacity follows 1/log(R/r)
    const auto r2 = relative_capacity({closed_disk(0.2, 256), disk(0.4, 256), y, CapacityMode::relative});
    const double ratio = r2.capacity / r.capacity;
    CHECK(std::abs(ratio / (std::log(4.0) / std::log(2.0)) - 1) <= 0.10);
}

TEST_CASE("monotonicity and subadditivity on random obstacle pairs") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> C(-0.4, 0.4), R(0.06, 0.15);
    const int n = 48;
    const auto y = YoungFunction::power(3);
    const DomainMask box(n, n, kD, true);
    for (int trial = 0; trial < 4; ++trial) {
        const Point c1{C(rng), C(rng)}, c2{C(rng), C(rng)};
        const double r1 = R(rng), r2 = R(rng);
        const auto e1 = closed_disk(r1, n, c1), e2 = closed_disk(r2, n, c2);
        const auto small = closed_disk(0.5 * r1, n, c1);
        auto cap = [&](const DomainMask &e) { return relative_capacity({e, box, y, CapacityMode::relative}).capacity; };
        if (!small.empty()) CHECK(cap(small) <= cap(e1) + 1e-8);
        CHECK(cap(e1 | e2) <= cap(e1) + cap(e2) + 1e-8);

        // the Sobolev problem needs room around the union, so use a wider box
        const Box wide{-3, -3, 3, 3};
        const int nw = 3 * n;
        const DomainMask wide_box(nw, nw, wide, true);
        const auto w1 = rasterize(Shape::closed_disk(c1, r1), nw, nw, wide);
        const auto w2 = rasterize(Shape::closed_disk(c2, r2), nw, nw, wide);
        auto scap = [&](const DomainMask &e) {
            return sobolev_capacity({e, wide_box, y, CapacityMode::sobolev}).capacity;
        };
        CHECK(scap(w1 | w2) <= scap(w1) + scap(w2) + 1e-8);
    }
}

TEST_CASE("Sobolev capacity dominates its gradient part") {
    const int n = 64;
    const auto y = YoungFunction::power(3);
    const auto r = sobolev_capacity({closed_disk(0.1, n), DomainMask(n, n, kD, true), y, CapacityMode::sobolev});
    const Mesh &m = *r.potential.mesh;
    double grad_part = 0;
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
        const Point g = triangle_gradient(m, t, r.potential.values);
        grad_part += m.areas[t] * y.Phi(std::hypot(g.x, g.y));
    }
    CHECK(r.capacity >= grad_part);
    CHECK(r.capacity > 0);
    for (double v : r.potential.values) CHECK(v <= 1 + 1e-8);
}

TEST_CASE("hypothesis capacity") {
    const int n = 64;
    const auto y = YoungFunction::power(3);
    const DomainMask box(n, n, kD, true);
    CHECK(hypothesis_capacity(disk(0.5, n), disk(0.7, n), box, y) == 0);
    double prev = 1e300;
    for (double r : {0.3, 0.15, 0.08}) {
        const auto bump = disk(0.5, n) | disk(r, n, {0.5 + r, 0});
        const double c = hypothesis_capacity(bump, disk(0.5, n), box, y);
        CHECK(c > 0);
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("capacity errors") {
    const int n = 32;
    const auto y = YoungFunction::power(3);
    CHECK_THROWS_AS(relative_capacity({disk(0.8, n), disk(0.4, n), y, CapacityMode::relative}), ValidationError);
    CHECK_THROWS_AS(relative_capacity({disk(0.2, n), disk(0.4, n), y, CapacityMode::sobolev}), ValidationError);
    CHECK_THROWS_AS(relative_capacity({disk(0.2, n), disk(0.4, 40), y, CapacityMode::relative}), ValidationError);
    CHECK_THROWS_AS(sobolev_capacity({disk(0.3, n), disk(0.5, n), y, CapacityMode::sobolev}), ValidationError);
    const auto touching = relative_capacity({disk(0.4, n), disk(0.4, n), y, CapacityMode::relative});
    CHECK(touching.touches_boundary);
}
