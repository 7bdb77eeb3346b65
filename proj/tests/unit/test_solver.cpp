#include <doctest.h>

#include "philab/orlicz.hpp"
#include "philab/solver.hpp"
#include "philab/source.hpp"

#include <cmath>
#include <random>

using namespace philab;
using doctest::Approx;

namespace {

const Box kD{-1, -1, 1, 1};

// Recorded constants for Phi = t^3/3 on D = [-1,1]^2 (sources in the families below).
constexpr double kAprioriP3 = 0.6;
constexpr double kStabilityP3 = 0.45;

std::shared_ptr<const Mesh> disk_mesh(int n) {
    return std::make_shared<const Mesh>(triangulate(rasterize(Shape::disk({0, 0}, 1), n, n, kD)));
}

std::vector<double> random_free(const Mesh &m, std::mt19937_64 &rng, double scale = 1) {
    std::uniform_real_distribution<double> U(-scale, scale);
    std::vector<double> u(m.num_nodes(), 0.0);
    for (std::size_t n = 0; n < u.size(); ++n)
        if (!m.dirichlet[n]) u[n] = U(rng);
    return u;
}

WeightedSamples grad_samples(const Mesh &m, const std::vector<double> &u) {
    std::vector<double> g(m.num_triangles());
    for (std::size_t t = 0; t < g.size(); ++t) {
        const Point d = triangle_gradient(m, t, u);
        g[t] = std::hypot(d.x, d.y);
    }
    return WeightedSamples(g, m.areas);
}

// Independent P1 stiffness times u minus lumped load, from vertex coordinates only.
std::vector<double> linear_residual(const Mesh &m, const std::vector<double> &f, const std::vector<double> &u) {
    std::vector<double> r(m.num_nodes(), 0.0);
    for (const auto &t : m.triangles) {
        Point p[3];
        for (int a = 0; a < 3; ++a) p[a] = m.nodes[t[a]];
        const double area = 0.5 * std::abs((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
        double bx[3], by[3];
        for (int a = 0; a < 3; ++a) {
            const Point &q = p[(a + 1) % 3], &s = p[(a + 2) % 3];
            bx[a] = (q.y - s.y) / (2 * area);
            by[a] = (s.x - q.x) / (2 * area);
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                r[t[a]] += area * (bx[a] * bx[b] + by[a] * by[b]) * u[t[b]];
        for (int a = 0; a < 3; ++a) r[t[a]] -= area / 3 * f[t[a]];
    }
    for (std::size_t n = 0; n < r.size(); ++n)
        if (m.dirichlet[n]) r[n] = 0;
    return r;
}

} // namespace

TEST_CASE("energy basics") {
    const auto y = YoungFunction::power(3);
    auto mesh = disk_mesh(16);
    const std::vector<double> zero(mesh->num_nodes(), 0.0), one(mesh->num_nodes(), 1.0);
    CHECK(energy(y, *mesh, one, zero) == 0);
    std::mt19937_64 rng(1);
    CHECK(energy(y, *mesh, zero, random_free(*mesh, rng)) >= 0);
}

TEST_CASE("single cell hand assembly") {
    // one cell of side h, u = (x - x0)/h: gradient (1/h, 0) on both triangles
    const double h = 0.25;
    DomainMask m(4, 4, Box{0, 0, 1, 1});
    m.set(1, 2, true);
    const auto mesh = triangulate(m);
    std::vector<double> u(mesh.num_nodes());
    for (std::size_t n = 0; n < u.size(); ++n) u[n] = (mesh.nodes[n].x - 0.25) / h;
    const std::vector<double> f(u.size(), 0.0);
    CHECK(energy(YoungFunction::power(3), mesh, f, u) == Approx(h * h * std::pow(1 / h, 3) / 3).epsilon(1e-13));
}

TEST_CASE("gradient matches central differences") {
    std::mt19937_64 rng(2);
    auto mesh = disk_mesh(12);
    for (const char *spec : {"power:3", "powerlog:1,1,1", "spliced:2,3,1.5"}) {
        INFO(spec);
        const auto y = parse_young(spec);
        const auto f = sample_nodes(*mesh, SourceTerm::parse("affine:1,0.5,-0.3"));
        const std::vector<double> d(mesh->num_nodes(), 0.7);
        // smooth field with gradient bounded away from zero
        std::vector<double> u(mesh->num_nodes(), 0.0);
        for (std::size_t n = 0; n < u.size(); ++n)
            if (!mesh->dirichlet[n]) u[n] = 2 * mesh->nodes[n].x + 0.3 * std::sin(3 * mesh->nodes[n].y) + 0.5;
        const auto w = random_free(*mesh, rng);
        const auto g = gradient(y, *mesh, f, u, &d);
        double analytic = 0;
        for (std::size_t n = 0; n < u.size(); ++n) analytic += g[n] * w[n];
        const double step = 1e-6;
        auto shifted = [&](double s) {
            std::vector<double> v = u;
            for (std::size_t n = 0; n < v.size(); ++n) v[n] += s * w[n];
            return energy(y, *mesh, f, v, &d);
        };
        const double fd = (shifted(step) - shifted(-step)) / (2 * step);
        CHECK(analytic == Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("p = 2 gradient equals stiffness times u minus load") {
    std::mt19937_64 rng(3);
    auto mesh = disk_mesh(20);
    const auto y = YoungFunction::power(2);
    const auto f = sample_nodes(*mesh, SourceTerm::parse("quad:1,2,-1"));
    const auto u = random_free(*mesh, rng);
    const auto g = gradient(y, *mesh, f, u);
    const auto r = linear_residual(*mesh, f, u);
    double scale = 0;
    for (double v : r) scale = std::max(scale, std::abs(v));
    for (std::size_t n = 0; n < g.size(); ++n) CHECK(std::abs(g[n] - r[n]) <= 1e-12 * std::max(1.0, scale));
}

TEST_CASE("zero source gives the zero solution") {
    auto mesh = disk_mesh(16);
    const auto s = solve(YoungFunction::power(3), mesh, std::vector<double>(mesh->num_nodes(), 0.0));
    for (double v : s.field.values) CHECK(v == 0);
}

TEST_CASE("torsion p = 2 against (1 - |x|^2)/4") {
    auto mesh = disk_mesh(128);
    const auto s = solve(YoungFunction::power(2), mesh, std::vector<double>(mesh->num_nodes(), 1.0));
    CHECK(s.report.converged);
    double umax = 0, err = 0;
    for (std::size_t n = 0; n < mesh->num_nodes(); ++n) {
        const Point p = mesh->nodes[n];
        umax = std::max(umax, s.field.values[n]);
        err = std::max(err, std::abs(s.field.values[n] - (1 - p.x * p.x - p.y * p.y) / 4));
        if (mesh->dirichlet[n]) CHECK(s.field.values[n] == 0);
    }
    CHECK(std::abs(umax - 0.25) <= 0.02);
    CHECK(err <= 0.02);
    CHECK(s.report.residual <= 1e-8);
    CHECK(weak_residual(YoungFunction::power(2), *mesh, std::vector<double>(mesh->num_nodes(), 1.0),
                        s.field.values) <= 1e-8);
}

TEST_CASE("torsion p = 3 against the radial profile") {
    auto mesh = disk_mesh(128);
    const auto s = solve(YoungFunction::power(3), mesh, std::vector<double>(mesh->num_nodes(), 1.0));
    double center = 0;
    for (std::size_t n = 0; n < mesh->num_nodes(); ++n)
        if (std::hypot(mesh->nodes[n].x, mesh->nodes[n].y) < 1e-12) center = s.field.values[n];
    CHECK(center == Approx(std::sqrt(2.0) / 3).epsilon(0.03));
    for (std::size_t i = 1; i < s.report.energy_history.size(); ++i)
        CHECK(s.report.energy_history[i] <= s.report.energy_history[i - 1]);
}

TEST_CASE("weak residual") {
    auto mesh = disk_mesh(24);
    const auto y = YoungFunction::power(3);
    const std::vector<double> f(mesh->num_nodes(), 1.0), zero(mesh->num_nodes(), 0.0);
    const auto &w = mesh->node_weights();
    double wmax = 0, total = 0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        total += w[n];
        if (!mesh->dirichlet[n]) wmax = std::max(wmax, w[n]);
    }
    CHECK(weak_residual(y, *mesh, f, zero) == Approx(wmax / (1 + total)).epsilon(1e-12));

    const auto s = solve(y, mesh, f);
    const double r0 = weak_residual(y, *mesh, f, s.field.values);
    CHECK(r0 <= 1e-8);
    auto bumped = s.field.values;
    for (std::size_t n = 0; n < bumped.size(); ++n)
        if (!mesh->dirichlet[n]) {
            bumped[n] += 0.1;
            break;
        }
    CHECK(weak_residual(y, *mesh, f, bumped) > r0);
}

TEST_CASE("restarts agree and the iteration cap raises") {
    std::mt19937_64 rng(4);
    auto mesh = disk_mesh(32);
    const auto y = YoungFunction::power(3);
    const std::vector<double> f(mesh->num_nodes(), 1.0);
    const auto a = solve(y, mesh, f);
    SolveOptions o;
    o.initial_guess = random_free(*mesh, rng, 2.0);
    const auto b = solve(y, mesh, f, o);
    for (std::size_t n = 0; n < f.size(); ++n) CHECK(std::abs(a.field.values[n] - b.field.values[n]) <= 1e-6);

    SolveOptions capped;
    capped.max_iterations = 1;
    try {
        solve(y, mesh, f, capped);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError &e) {
        CHECK(e.last_iterate().size() == mesh->num_nodes());
        CHECK(e.residual() > capped.tol_residual);
    }
}

TEST_CASE("zero-order term") {
    auto mesh = disk_mesh(32);
    const auto y = YoungFunction::power(3);
    const std::vector<double> f(mesh->num_nodes(), 1.0), d(mesh->num_nodes(), 5.0);
    SolveOptions o;
    o.zero_order = d;
    const auto with = solve(y, mesh, f, o);
    const auto without = solve(y, mesh, f);
    CHECK(weak_residual(y, *mesh, f, with.field.values, &d) <= 1e-8);
    for (std::size_t n = 0; n < f.size(); ++n) CHECK(with.field.values[n] <= without.field.values[n] + 1e-9);
    o.zero_order = std::vector<double>(mesh->num_nodes(), -1.0);
    CHECK_THROWS_AS(solve(y, mesh, f, o), ValidationError);
}

TEST_CASE("order principles") {
    const auto y = YoungFunction::power(3);
    auto big = disk_mesh(40);
    const auto small_mask = rasterize(Shape::disk({0.1, 0}, 0.7), 40, 40, kD);
    auto small = std::make_shared<const Mesh>(triangulate(small_mask));
    const auto f1 = sample_nodes(*big, SourceTerm::parse("quad:0.5,1,0"));
    const auto f2 = sample_nodes(*big, SourceTerm::parse("quad:1,1,0.5"));
    const auto u1 = solve(y, big, f1).field.values;
    const auto u2 = solve(y, big, f2).field.values;
    for (std::size_t n = 0; n < u1.size(); ++n) {
        CHECK(u1[n] <= u2[n] + 1e-6);
        CHECK(u1[n] >= -1e-6);
    }
    const auto us = solve(y, small, sample_nodes(*small, SourceTerm::parse("quad:0.5,1,0"))).field.values;
    const auto lat_small = to_lattice(*small, us), lat_big = to_lattice(*big, u1);
    for (std::size_t n = 0; n < lat_small.size(); ++n) CHECK(lat_small[n] <= lat_big[n] + 1e-6);
}

TEST_CASE("a priori bound and stability with recorded constants") {
    const auto y = YoungFunction::power(3);
    for (int n : {24, 40}) {
        for (const auto &mask : {DomainMask(n, n, kD, true), rasterize(Shape::disk({0, 0}, 1), n, n, kD)}) {
            auto mesh = std::make_shared<const Mesh>(triangulate(mask));
            std::vector<std::vector<double>> fs, us;
            for (const char *s : {"const:0.1", "const:1", "const:2", "affine:1,0.5,-0.5", "quad:0.5,1,1"}) {
                fs.push_back(sample_nodes(*mesh, SourceTerm::parse(s)));
                us.push_back(solve(y, mesh, fs.back()).field.values);
            }
            for (std::size_t i = 0; i < fs.size(); ++i) {
                const double fn = conjugate_luxemburg_norm(y, WeightedSamples(fs[i], mesh->node_weights()));
                CHECK(luxemburg_norm(y, grad_samples(*mesh, us[i])) <= kAprioriP3 * std::pow(fn, 1 / y.p_minus()));
                for (std::size_t j = 0; j < i; ++j) {
                    std::vector<double> du(us[i].size()), df(fs[i].size());
                    for (std::size_t k = 0; k < du.size(); ++k) {
                        du[k] = us[i][k] - us[j][k];
                        df[k] = fs[i][k] - fs[j][k];
                    }
                    const double rhs = conjugate_luxemburg_norm(y, WeightedSamples(df, mesh->node_weights()));
                    CHECK(modular(y, grad_samples(*mesh, du)) <= kStabilityP3 * rhs);
                }
            }
        }
    }
    // along f2 = (1 + s) f1 the left side vanishes as s -> 0
    auto mesh = disk_mesh(24);
    const std::vector<double> f1(mesh->num_nodes(), 1.0);
    const auto u1 = solve(y, mesh, f1).field.values;
    double prev = 1e300;
    for (double s : {0.5, 0.1, 0.01}) {
        std::vector<double> f2(f1.size(), 1 + s);
        const auto u2 = solve(y, mesh, f2).field.values;
        std::vector<double> du(u1.size());
        for (std::size_t k = 0; k < du.size(); ++k) du[k] = u2[k] - u1[k];
        const double gap = modular(y, grad_samples(*mesh, du));
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-6);
}
