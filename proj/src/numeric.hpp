#pragma once
// Scalar quadrature and root bracketing shared by the library.

#include "philab/young.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace philab::detail {

inline constexpr double quadrature_tolerance = 1e-12;

/// Adaptive double-exponential quadrature on [a, b]; tolerates integrable
/// endpoint singularities such as sqrt at 0.
template <class F>
double integrate(F &&f, double a, double b) {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
    if (a == b) return 0.0;
    return integrator.integrate(f, a, b, quadrature_tolerance);
}

/// Solve f(t) = s for a continuous increasing f with f(0) = 0, s > 0.
/// Brackets by doubling/halving from t = 1, then refines with TOMS 748.
template <class F>
double invert_increasing(F &&f, double s, const char *name) {
    double lo = 0, hi = 1;
    if (f(hi) < s) {
        lo = hi;
        int k = 0;
        while (f(hi = 2 * lo) < s) {
            lo = hi;
            if (++k > 2000 || !std::isfinite(hi))
                throw BracketError(std::string("cannot bracket inverse of ") + name, lo, hi);
        }
    } else {
        lo = 0.5;
        int k = 0;
        while (f(lo) > s) {
            hi = lo;
            lo *= 0.5;
            if (++k > 2000 || lo == 0)
                throw BracketError(std::string("cannot bracket inverse of ") + name, lo, hi);
        }
    }
    std::uintmax_t iters = 200;
    auto g = [&](double t) { return f(t) - s; };
    const auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(48), iters);
    return 0.5 * (r.first + r.second);
}

} // namespace philab::detail
