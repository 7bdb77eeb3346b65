#include "philab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace philab {

WeightedSamples::WeightedSamples(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
    if (values_.size() != weights_.size()) throw ValidationError("WeightedSamples: length mismatch");
    for (double w : weights_)
        if (!(w > 0) || !std::isfinite(w)) throw ValidationError("WeightedSamples: weights must be positive");
    for (double v : values_)
        if (!std::isfinite(v)) throw ValidationError("WeightedSamples: values must be finite");
}

WeightedSamples WeightedSamples::scaled(double factor) const {
    WeightedSamples out = *this;
    for (double &v : out.values_) v *= factor;
    return out;
}

namespace {

double modular_with(const std::function<double(double)> &F, const WeightedSamples &s, double scale) {
    double acc = 0;
    const auto &v = s.values();
    const auto &w = s.weights();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) acc += w[i] * F(std::abs(v[i]) * scale);
    return acc;
}

// inf { lambda : m(1/lambda) <= 1 } where m(c) = modular of c*s is increasing in c.
double luxemburg_with(const std::function<double(double)> &F, const WeightedSamples &s) {
    double vmax = 0;
    for (double v : s.values()) vmax = std::max(vmax, std::abs(v));
    if (vmax == 0) return 0;

    auto too_small = [&](double lambda) { return modular_with(F, s, 1.0 / lambda) > 1.0; };
    double lo = vmax, hi = vmax;
    if (too_small(vmax)) {
        while (too_small(hi)) {
            lo = hi;
            hi *= 2;
        }
    } else {
        while (!too_small(lo)) {
            hi = lo;
            lo *= 0.5;
            if (lo == 0) return hi;
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (too_small(mid))
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

} // namespace

double modular(const YoungFunction &y, const WeightedSamples &s) {
    return modular_with([&](double t) { return y.Phi(t); }, s, 1.0);
}

double luxemburg_norm(const YoungFunction &y, const WeightedSamples &s) {
    return luxemburg_with([&](double t) { return y.Phi(t); }, s);
}

double conjugate_luxemburg_norm(const YoungFunction &y, const WeightedSamples &s) {
    return luxemburg_with([&](double t) { return y.Phi_star(t); }, s);
}

double sobolev_norm(const YoungFunction &y, const WeightedSamples &u, const WeightedSamples &grad) {
    return luxemburg_norm(y, u) + luxemburg_norm(y, grad);
}

} // namespace philab
