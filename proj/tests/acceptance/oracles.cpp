#include "oracles.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

double torsion_p2(double x, double y) { return (1 - x * x - y * y) / 4; }

double torsion_p2_energy() { return -std::numbers::pi / 16; }

double torsion_p3_center() {
    const int n = 20000;
    const double h = 1.0 / n;
    auto g = [](double r) { return std::sqrt(r / 2); };
    double s = g(0) + g(1);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * g(i * h);
    return s * h / 3;
}

double radial_condenser(double a, double b, int elements) {
    const int n = elements;
    const double h = (b - a) / n;
    // stiffness of pi int u'^2 r dr; pi is applied at the end
    std::vector<double> k(n);
    for (int e = 0; e < n; ++e) k[e] = (a + (e + 0.5) * h) / h;
    // Thomas algorithm on unknowns 1..n-1 with u_0 = 1, u_n = 0
    std::vector<double> c(n + 1, 0.0), d(n + 1, 0.0), u(n + 1, 0.0);
    for (int i = 1; i < n; ++i) {
        const double diag = k[i - 1] + k[i];
        const double lower = i > 1 ? -k[i - 1] : 0.0;
        const double rhs = i == 1 ? k[0] : 0.0;
        const double m = diag - lower * c[i - 1];
        c[i] = -k[i] / m;
        d[i] = (rhs - lower * d[i - 1]) / m;
    }
    u[0] = 1;
    for (int i = n - 1; i >= 1; --i) u[i] = d[i] - c[i] * u[i + 1];
    double e = 0;
    for (int i = 0; i < n; ++i) e += k[i] * (u[i + 1] - u[i]) * (u[i + 1] - u[i]);
    return std::numbers::pi * e;
}

double bessel_first_eigenvalue() {
    const double j = boost::math::cyl_bessel_j_zero(0.0, 1);
    return j * j;
}

double monotonicity_constant_p3() { return 2.0 * 3.0 / (9.0 * std::pow(12.0, 1.5)); }

double power3_gap(const double *a, const double *b, int d) {
    double na = 0, nb = 0;
    for (int i = 0; i < d; ++i) {
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    double g = 0;
    for (int i = 0; i < d; ++i) g += (na * a[i] - nb * b[i]) * (a[i] - b[i]);
    return g;
}

bool morrey_finite_rule(double p, int n) { return p > n; }

} // namespace oracle
