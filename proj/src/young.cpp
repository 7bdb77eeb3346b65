#include "philab/young.hpp"

#include "numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

namespace philab {

struct YoungFunction::Node {
    YoungFamily family;
    std::vector<double> params;
    std::vector<double> weights;
    std::vector<YoungFunction> operands;
    double p_minus = 0;
    double p_plus = 0;
    // spliced: phi(t) = c2 t^a2 + d for t >= t0
    double c2 = 0;
    double d = 0;
};

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0; }

void require_nonnegative(double t) {
    if (!(t >= 0) || std::isnan(t))
        throw ValidationError("Young function argument must be >= 0, got " + std::to_string(t));
}

} // namespace

YoungFunction YoungFunction::power(double p) {
    if (!(std::isfinite(p) && p > 1)) throw ValidationError("power: exponent must satisfy p > 1");
    auto n = std::make_shared<Node>();
    n->family = YoungFamily::power;
    n->params = {p};
    n->p_minus = n->p_plus = p - 1;
    return YoungFunction(std::move(n));
}

YoungFunction YoungFunction::power_log(double a, double b, double c) {
    if (!finite_positive(a) || !finite_positive(c))
        throw ValidationError("powerlog: a and c must be positive");
    if (!(std::isfinite(b) && b >= 1))
        throw ValidationError("powerlog: b must be >= 1, otherwise phi is negative near 0");
    auto n = std::make_shared<Node>();
    n->family = YoungFamily::power_log;
    n->params = {a, b, c};
    n->p_minus = a;
    n->p_plus = a + 1;
    return YoungFunction(std::move(n));
}

YoungFunction YoungFunction::spliced(double a1, double a2, double t0) {
    if (!(std::isfinite(a1) && a1 > 1 && std::isfinite(a2) && a2 > 1))
        throw ValidationError("spliced: exponents must exceed 1");
    if (!finite_positive(t0)) throw ValidationError("spliced: splice point must be positive");
    auto n = std::make_shared<Node>();
    n->family = YoungFamily::spliced;
    n->params = {a1, a2, t0};
    // phi'(t0-) = phi'(t0+) and phi(t0-) = phi(t0+), with c1 = 1.
    n->c2 = (a1 / a2) * std::pow(t0, a1 - a2);
    n->d = std::pow(t0, a1) * (1.0 - a1 / a2);
    const double at_splice = n->c2 * std::pow(t0, a2) + n->d;
    if (!(n->c2 > 0) || !(at_splice > 0) || !std::isfinite(n->d))
        throw ValidationError("spliced: data makes phi non-monotone");
    n->p_minus = std::min(a1, a2);
    n->p_plus = std::max(a1, a2);
    return YoungFunction(std::move(n));
}

YoungFunction YoungFunction::sum(double w1, const YoungFunction &y1, double w2, const YoungFunction &y2) {
    if (!(std::isfinite(w1) && std::isfinite(w2) && w1 >= 0 && w2 >= 0 && w1 + w2 > 0))
        throw ValidationError("sum: weights must be nonnegative and not both zero");
    auto n = std::make_shared<Node>();
    n->family = YoungFamily::sum;
    n->weights = {w1, w2};
    n->operands = {y1, y2};
    n->p_minus = std::numeric_limits<double>::infinity();
    n->p_plus = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i) {
        if (n->weights[i] == 0) continue;
        n->p_minus = std::min(n->p_minus, n->operands[i].p_minus());
        n->p_plus = std::max(n->p_plus, n->operands[i].p_plus());
    }
    return YoungFunction(std::move(n));
}

YoungFunction YoungFunction::product(const YoungFunction &y1, const YoungFunction &y2) {
    auto n = std::make_shared<Node>();
    n->family = YoungFamily::product;
    n->operands = {y1, y2};
    n->p_minus = y1.p_minus() + y2.p_minus();
    n->p_plus = y1.p_plus() + y2.p_plus();
    return YoungFunction(std::move(n));
}

YoungFunction YoungFunction::composition(const YoungFunction &outer, const YoungFunction &inner) {
    auto n = std::make_shared<Node>();
    n->family = YoungFamily::composition;
    n->operands = {outer, inner};
    n->p_minus = outer.p_minus() * inner.p_minus();
    n->p_plus = outer.p_plus() * inner.p_plus();
    return YoungFunction(std::move(n));
}

YoungFamily YoungFunction::family() const { return node_->family; }
std::span<const double> YoungFunction::params() const { return node_->params; }
std::vector<YoungFunction> YoungFunction::operands() const { return node_->operands; }
std::span<const double> YoungFunction::weights() const { return node_->weights; }
double YoungFunction::p_minus() const { return node_->p_minus; }
double YoungFunction::p_plus() const { return node_->p_plus; }

double YoungFunction::phi(double t) const {
    require_nonnegative(t);
    const Node &n = *node_;
    switch (n.family) {
    case YoungFamily::power:
        return std::pow(t, n.params[0] - 1);
    case YoungFamily::power_log: {
        const double a = n.params[0], b = n.params[1], c = n.params[2];
        return std::pow(t, a) * (std::log(b) + std::log1p(c * t / b));
    }
    case YoungFamily::spliced:
        if (t <= n.params[2]) return std::pow(t, n.params[0]);
        return n.c2 * std::pow(t, n.params[1]) + n.d;
    case YoungFamily::sum:
        return n.weights[0] * n.operands[0].phi(t) + n.weights[1] * n.operands[1].phi(t);
    case YoungFamily::product:
        return n.operands[0].phi(t) * n.operands[1].phi(t);
    case YoungFamily::composition:
        return n.operands[0].phi(n.operands[1].phi(t));
    }
    return 0;
}

double YoungFunction::phi_prime(double t) const {
    require_nonnegative(t);
    const Node &n = *node_;
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (n.family) {
    case YoungFamily::power: {
        const double p = n.params[0];
        if (t == 0) return p > 2 ? 0.0 : (p == 2 ? 1.0 : inf);
        return (p - 1) * std::pow(t, p - 2);
    }
    case YoungFamily::power_log: {
        const double a = n.params[0], b = n.params[1], c = n.params[2];
        if (t == 0) {
            if (b == 1) return 0.0; // t^(a-1) * c t vanishes for a > 0
            return a > 1 ? 0.0 : (a == 1 ? std::log(b) : inf);
        }
        const double logterm = std::log(b) + std::log1p(c * t / b);
        return a * std::pow(t, a - 1) * logterm + std::pow(t, a) * c / (b + c * t);
    }
    case YoungFamily::spliced: {
        if (t <= n.params[2]) return n.params[0] * std::pow(t, n.params[0] - 1);
        return n.c2 * n.params[1] * std::pow(t, n.params[1] - 1);
    }
    case YoungFamily::sum:
        return n.weights[0] * n.operands[0].phi_prime(t) + n.weights[1] * n.operands[1].phi_prime(t);
    case YoungFamily::product: {
        const auto &f = n.operands[0], &g = n.operands[1];
        const double fp = f.phi_prime(t), gp = g.phi_prime(t);
        const double fv = f.phi(t), gv = g.phi(t);
        // 0 * inf at t = 0 is resolved to 0 since phi(0) = 0 dominates
        const double left = (gv == 0) ? 0.0 : fp * gv;
        const double right = (fv == 0) ? 0.0 : fv * gp;
        return left + right;
    }
    case YoungFamily::composition: {
        const auto &outer = n.operands[0], &inner = n.operands[1];
        return outer.phi_prime(inner.phi(t)) * inner.phi_prime(t);
    }
    }
    return 0;
}

double YoungFunction::Phi(double t) const {
    require_nonnegative(t);
    const Node &n = *node_;
    if (t == 0) return 0.0;
    switch (n.family) {
    case YoungFamily::power: {
        const double p = n.params[0];
        return std::pow(t, p) / p;
    }
    case YoungFamily::spliced: {
        const double a1 = n.params[0], a2 = n.params[1], t0 = n.params[2];
        if (t <= t0) return std::pow(t, a1 + 1) / (a1 + 1);
        return std::pow(t0, a1 + 1) / (a1 + 1) +
               n.c2 * (std::pow(t, a2 + 1) - std::pow(t0, a2 + 1)) / (a2 + 1) + n.d * (t - t0);
    }
    case YoungFamily::sum:
        return n.weights[0] * n.operands[0].Phi(t) + n.weights[1] * n.operands[1].Phi(t);
    case YoungFamily::power_log:
    case YoungFamily::product:
    case YoungFamily::composition:
        return detail::integrate([this](double s) { return phi(s); }, 0.0, t);
    }
    return 0;
}

double YoungFunction::phi_inv(double s) const {
    require_nonnegative(s);
    const Node &n = *node_;
    if (s == 0) return 0.0;
    switch (n.family) {
    case YoungFamily::power:
        return std::pow(s, 1.0 / (n.params[0] - 1));
    case YoungFamily::spliced: {
        const double a1 = n.params[0], a2 = n.params[1], t0 = n.params[2];
        if (s <= std::pow(t0, a1)) return std::pow(s, 1.0 / a1);
        return std::pow((s - n.d) / n.c2, 1.0 / a2);
    }
    default:
        return detail::invert_increasing([this](double t) { return phi(t); }, s, "phi");
    }
}

double YoungFunction::Phi_inv(double s) const {
    require_nonnegative(s);
    const Node &n = *node_;
    if (s == 0) return 0.0;
    if (n.family == YoungFamily::power) {
        const double p = n.params[0];
        return std::pow(p * s, 1.0 / p);
    }
    return detail::invert_increasing([this](double t) { return Phi(t); }, s, "Phi");
}

double YoungFunction::Phi_star_quadrature(double s) const {
    require_nonnegative(s);
    if (s == 0) return 0.0;
    return detail::integrate([this](double r) { return phi_inv(r); }, 0.0, s);
}

double YoungFunction::Phi_star(double s) const {
    require_nonnegative(s);
    const Node &n = *node_;
    if (s == 0) return 0.0;
    if (n.family == YoungFamily::power) {
        const double q = n.params[0] / (n.params[0] - 1);
        return std::pow(s, q) / q;
    }
    // equality case of the Young inequality: Phi*(phi(t)) = t phi(t) - Phi(t)
    const double t = phi_inv(s);
    return std::max(s * t - Phi(t), 0.0);
}

double YoungFunction::evaluate(YoungQuantity which, double t) const {
    require_nonnegative(t);
    switch (which) {
    case YoungQuantity::phi: return phi(t);
    case YoungQuantity::phi_prime: return phi_prime(t);
    case YoungQuantity::Phi: return Phi(t);
    case YoungQuantity::Phi_star: return Phi_star(t);
    case YoungQuantity::Phi_inv: return Phi_inv(t);
    case YoungQuantity::phi_inv: return phi_inv(t);
    }
    return 0;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0 && hi >= lo) || n == 0) throw ValidationError("log_grid: need 0 < lo <= hi and n >= 1");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(llo + (lhi - llo) * double(i) / double(n - 1));
    return out;
}

namespace {

// Second central difference of f at x, normalised by the magnitude of the samples.
double relative_second_difference(auto &&f, double x, double h) {
    const double fp = f(x + h), f0 = f(x), fm = f(x - h);
    const double scale = std::abs(fp) + 2 * std::abs(f0) + std::abs(fm);
    if (scale == 0) return 0;
    return (fp - 2 * f0 + fm) / scale;
}

} // namespace

GrowthReport verify_growth(const YoungFunction &y, std::span<const double> grid) {
    GrowthReport r;
    r.p_minus = r.lprime_minus = std::numeric_limits<double>::infinity();
    r.p_plus = r.lprime_plus = -std::numeric_limits<double>::infinity();
    r.phi_convex = r.Phi_convex = r.Phi_tilde_convex = true;
    if (grid.empty()) return r;

    constexpr double convexity_slack = -1e-9;
    auto Phi = [&](double t) { return y.Phi(t); };
    auto phi = [&](double t) { return y.phi(t); };
    auto Phi_tilde = [&](double s) { return y.Phi(std::sqrt(s)); };

    for (double t : grid) {
        if (!(t > 0)) throw ValidationError("verify_growth: grid must be strictly positive");
        const double h = 1e-6 * t;
        const double phi_t = y.phi(t);
        const double dphi = (y.phi(t + h) - y.phi(t - h)) / (2 * h);
        const double ratio = t * dphi / phi_t;
        const double lprime = t * phi_t / y.Phi(t);
        r.p_minus = std::min(r.p_minus, ratio);
        r.p_plus = std::max(r.p_plus, ratio);
        r.lprime_minus = std::min(r.lprime_minus, lprime);
        r.lprime_plus = std::max(r.lprime_plus, lprime);

        const double step = 1e-3 * t;
        if (relative_second_difference(phi, t, step) < convexity_slack) r.phi_convex = false;
        if (relative_second_difference(Phi, t, step) < convexity_slack) r.Phi_convex = false;
        const double s = t * t;
        if (relative_second_difference(Phi_tilde, s, 1e-3 * s) < convexity_slack) r.Phi_tilde_convex = false;
    }
    r.p_minus_violated = r.p_minus <= 1.0 + 1e-9;
    r.within_declared = r.p_minus >= y.p_minus() - 1e-6 && r.p_plus <= y.p_plus() + 1e-6;
    return r;
}

double monotonicity_constant(double p_minus) {
    return p_minus * (p_minus + 1) / (9.0 * std::pow(12.0, (p_minus + 1) / 2));
}

double monotonicity_gap(const YoungFunction &y, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ValidationError("monotonicity_gap: dimension mismatch");
    double na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    const double sa = na > 0 ? y.phi(na) / na : 0.0;
    const double sb = nb > 0 ? y.phi(nb) / nb : 0.0;
    double gap = 0;
    for (std::size_t i = 0; i < a.size(); ++i) gap += (sa * a[i] - sb * b[i]) * (a[i] - b[i]);
    return gap;
}

std::string to_string(IntegralVerdict v) {
    switch (v) {
    case IntegralVerdict::finite: return "finite";
    case IntegralVerdict::divergent: return "divergent";
    case IntegralVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

MorreyResult morrey_integral(const YoungFunction &y, int n) {
    if (n < 1) throw ValidationError("morrey_integral: dimension must be >= 1");
    MorreyResult res;
    const double inv_n = 1.0 / n;
    // Phi^{-1}(t) is pinned between Phi^{-1}(1) t^(1/(p+ +1)) and Phi^{-1}(1) t^(1/(p- +1)) on t >= 1.
    const double slowest = 1.0 / (y.p_plus() + 1) - 1 - inv_n;
    const double fastest = 1.0 / (y.p_minus() + 1) - 1 - inv_n;
    if (slowest >= -1) {
        res.verdict = IntegralVerdict::divergent;
        res.value = std::numeric_limits<double>::infinity();
        res.upper = std::numeric_limits<double>::infinity();
        return res;
    }

    const double inv1 = y.Phi_inv(1.0);
    auto integrand = [&](double t) { return y.Phi_inv(t) * std::pow(t, -1 - inv_n); };
    const bool tail_known = fastest < -1;
    auto tail = [&](double T) { return inv1 * std::pow(T, fastest + 1) / (-(fastest + 1)); };

    constexpr int max_doublings = 1000;
    double T = 1, value = 0;
    for (int i = 0; i < max_doublings; ++i) {
        value += boost::math::quadrature::gauss<double, 30>::integrate(integrand, T, 2 * T);
        T *= 2;
        if (tail_known && tail(T) < 1e-10 * std::max(1.0, value)) {
            res.verdict = IntegralVerdict::finite;
            res.value = value;
            res.upper = T;
            res.tail_bound = tail(T);
            return res;
        }
        if (!tail_known && i >= 64) break;
    }
    res.verdict = IntegralVerdict::inconclusive;
    res.value = value;
    res.upper = T;
    return res;
}

} // namespace philab
